// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dcc/channel.hpp"
#include "dcc/errors.hpp"
#include "dcc/geometry.hpp"
#include "dcc/links.hpp"

using namespace dcc;

namespace {

double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

const CarrierSpec kCarrier = CarrierSpec::from_frequency(25e9);
const double kLambda = kCarrier.wavelength_m;

} // namespace

TEST_CASE("zero noise variance passes the signal through") {
    RngStream rng = rng_substream(1, 0, 0);
    std::vector<std::complex<double>> x = {{1, 2}, {-3, 4}};
    const auto y = awgn(x, 0.0, rng);
    CHECK(y == x);
    CHECK_THROWS_AS(awgn(x, -1.0, rng), InvalidArgument);
}

TEST_CASE("noise variance matches N0 empirically") {
    RngStream rng = rng_substream(2, 0, 0);
    const std::size_t n = 1'000'000;
    std::vector<std::complex<double>> x(n, {0, 0});
    awgn_inplace(x, 1.0, rng);
    double var = 0.0;
    for (const auto& v : x) {
        var += std::norm(v);
    }
    var /= static_cast<double>(n);
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("identical streams give identical noise") {
    RngStream a = rng_substream(3, 7, 9);
    RngStream b = rng_substream(3, 7, 9);
    std::vector<std::complex<double>> xa(64, {0, 0});
    std::vector<std::complex<double>> xb(64, {0, 0});
    awgn_inplace(xa, 0.5, a);
    awgn_inplace(xb, 0.5, b);
    CHECK(xa == xb);
}

TEST_CASE("distinct labels give distinct streams") {
    std::set<std::uint64_t> first_draws;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        RngStream s = rng_substream(5, 0, i);
        first_draws.insert(s.next_u64());
    }
    CHECK(first_draws.size() == 1000);
}

TEST_CASE("substream outputs pass a mean/variance sanity check") {
    RngStream s = rng_substream(6, 1, 2);
    const int n = 200000;
    double mean = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = s.gaussian();
        mean += g;
        sq += g * g;
    }
    mean /= n;
    sq /= n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(sq == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("channel spec converts Eb/N0 with rate-aware energy accounting") {
    const ChannelSpec spec = ChannelSpec::make(0.0, 4.0, 7.0);
    CHECK(spec.n0 == doctest::Approx(7.0 / 4.0).epsilon(1e-12));
    const ChannelSpec spec10 = ChannelSpec::make(10.0, 4.0, 7.0);
    CHECK(spec10.n0 == doctest::Approx(0.175).epsilon(1e-12));
    CHECK_THROWS_AS(ChannelSpec::make(0.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("uncoded BPSK matches the Q-function anchor at 6 dB") {
    const auto link = make_uncoded_link(ModulationScheme::get(SchemeName::bpsk), 1);
    const double points[] = {6.0};
    const BerCurve curve = run_ber(*link, points, {100, 10'000'000}, 99);
    REQUIRE(curve.points.size() == 1);
    const BerPoint& p = curve.points[0];
    CHECK(p.bit_errors >= 100);
    const double expect = q_function(std::sqrt(2.0 * std::pow(10.0, 0.6)));
    CHECK(std::abs(p.ber - expect) <= 3.0 * p.ci95);
}

TEST_CASE("a noiseless surrogate point collects zero errors") {
    const auto link = make_uncoded_link(ModulationScheme::get(SchemeName::bpsk), 1);
    const double points[] = {200.0};
    const BerCurve curve = run_ber(*link, points, {100, 20'000}, 1);
    CHECK(curve.points[0].bit_errors == 0);
}

TEST_CASE("worker count does not change the CSV bytes") {
    const RisStack stack = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const GeneratorMatrix g = build_generator(stack);
    const auto link =
        make_block_dcc_link(g, ModulationScheme::get(SchemeName::bpsk), DetectorKind::ml);
    const double points[] = {0.0, 3.0};
    const StoppingRule stop{100, 200'000};
    std::ostringstream csv1, csv8;
    write_ber_csv(run_ber(*link, points, stop, 12345, 1), csv1);
    write_ber_csv(run_ber(*link, points, stop, 12345, 8), csv8);
    CHECK(csv1.str() == csv8.str());
    CHECK(csv1.str().rfind("scheme,detector,modulation,geometry_digest,seed,eb_n0_db,"
                           "frames,bit_errors,ber,ci95\n", 0) == 0);
}

TEST_CASE("mean codeword energy stays within 1% of the row count") {
    const RisStack stack = preset_74_evenly_spaced(kCarrier, kLambda / 2, 10 * kLambda);
    const GeneratorMatrix g = build_generator(stack);
    const auto link =
        make_block_dcc_link(g, ModulationScheme::get(SchemeName::bpsk), DetectorKind::ml);
    const double points[] = {4.0};
    // Long pinned run: per-frame energy variance is large for this geometry.
    const BerCurve curve = run_ber(*link, points, {~0ull, 2'000'000}, 7);
    CHECK(curve.points[0].mean_frame_energy ==
          doctest::Approx(static_cast<double>(g.rows)).epsilon(0.01));
}

TEST_CASE("BER is monotone across the sweep up to statistical slack") {
    const auto link = make_uncoded_link(ModulationScheme::get(SchemeName::qpsk), 2);
    const double points[] = {0.0, 2.0, 4.0, 6.0};
    const BerCurve curve = run_ber(*link, points, {200, 2'000'000}, 21);
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const BerPoint& a = curve.points[i];
        const BerPoint& b = curve.points[i + 1];
        CHECK(a.ber >= b.ber - 3.0 * (a.ci95 + b.ci95));
    }
}

TEST_CASE("a single SNR point reruns to identical tallies") {
    const auto link = make_uncoded_link(ModulationScheme::get(SchemeName::bpsk), 1);
    const double sweep[] = {2.0, 4.0, 6.0};
    const double standalone[] = {4.0};
    const StoppingRule stop{100, 1'000'000};
    const BerCurve full = run_ber(*link, sweep, stop, 777);
    const BerCurve single = run_ber(*link, standalone, stop, 777);
    CHECK(full.points[1].frames == single.points[0].frames);
    CHECK(full.points[1].bit_errors == single.points[0].bit_errors);
}

TEST_CASE("ML dominates MMSE and the reducer up to binomial slack") {
    const RisStack stack = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const GeneratorMatrix g = build_generator(stack);
    const ModulationScheme& m = ModulationScheme::get(SchemeName::bpsk);
    const double points[] = {2.0, 6.0};
    const StoppingRule stop{150, 400'000};
    const BerCurve ml = run_ber(*make_block_dcc_link(g, m, DetectorKind::ml), points, stop, 55);
    const BerCurve mmse =
        run_ber(*make_block_dcc_link(g, m, DetectorKind::mmse), points, stop, 55);
    const BerCurve red =
        run_ber(*make_block_dcc_link(g, m, DetectorKind::reducer), points, stop, 55);
    for (std::size_t i = 0; i < ml.points.size(); ++i) {
        const BerPoint& a = ml.points[i];
        for (const BerCurve* other : {&mmse, &red}) {
            const BerPoint& b = other->points[i];
            if (a.bit_errors < 100 || b.bit_errors < 100) {
                continue;
            }
            // Error-count comparison with 2 binomial standard deviations of slack.
            const double n_bits = static_cast<double>(b.frames) * 2.0;
            const double slack = 2.0 * std::sqrt(n_bits * b.ber * (1.0 - b.ber));
            const double a_errors_scaled =
                static_cast<double>(a.bit_errors) * (n_bits / (static_cast<double>(a.frames) * 2.0));
            CHECK(a_errors_scaled <= static_cast<double>(b.bit_errors) + slack);
        }
    }
}

TEST_CASE("empty sweeps and bad worker counts are config errors") {
    const auto link = make_uncoded_link(ModulationScheme::get(SchemeName::bpsk), 1);
    CHECK_THROWS_AS(run_ber(*link, {}, {100, 1000}, 1), ConfigError);
    const double points[] = {1.0};
    CHECK_THROWS_AS(run_ber(*link, points, {100, 1000}, 1, 0), ConfigError);
}
