// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dcc/channel.hpp"
#include "dcc/codec_trellis.hpp"
#include "dcc/errors.hpp"

using namespace dcc;

namespace {

const CarrierSpec kCarrier = CarrierSpec::from_frequency(25e9);
const double kLambda = kCarrier.wavelength_m;

const ModulationScheme& bpsk() { return ModulationScheme::get(SchemeName::bpsk); }

RisStack trellis_213_stack() {
    RisStack stack;
    stack.carrier = kCarrier;
    stack.layer1 = MetaAtomLayer::line(4, kLambda / 2, 0.0);
    stack.layer2 = MetaAtomLayer::line(2, kLambda / 2, 10 * kLambda);
    stack.separation_m = 10 * kLambda;
    return stack;
}

TrellisSpec spec_213() {
    return {TrellisVariant::extra_atoms, 1, 2, 3, 1};
}

// Runs the encoder over a full burst (zero initial state, mu flush frames).
std::vector<Codeword> encode_burst(const TrellisSpec& spec, const TrellisParts& parts,
                                   const std::vector<Dataword>& frames,
                                   const ModulationScheme& m) {
    TrellisState state;
    state.prev.assign(static_cast<std::size_t>(spec.mu),
                      Dataword(static_cast<std::size_t>(spec.k), 0));
    std::vector<Codeword> out;
    const Dataword zero(static_cast<std::size_t>(spec.k), 0);
    for (std::size_t t = 0; t < frames.size() + static_cast<std::size_t>(spec.mu); ++t) {
        const Dataword& d = t < frames.size() ? frames[t] : zero;
        out.push_back(trellis_output(spec, parts, state, d, m));
        if (spec.mu > 0) {
            state.prev.pop_back();
            state.prev.insert(state.prev.begin(), d);
        }
    }
    return out;
}

// Exhaustive sequence-ML oracle: argmin over all input sequences, iterated
// in lexicographic order with strict improvement.
std::vector<Dataword> brute_force_ml(const TrellisSpec& spec, const TrellisParts& parts,
                                     const ModulationScheme& m,
                                     const std::vector<Codeword>& y, std::size_t data_frames) {
    const std::size_t bits = data_frames * static_cast<std::size_t>(spec.k) *
                             static_cast<std::size_t>(spec.b);
    REQUIRE(bits <= 20);
    std::vector<Dataword> best;
    double best_metric = 1e300;
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << bits); ++word) {
        std::vector<Dataword> frames(data_frames);
        std::uint64_t rem = word;
        const int kb = spec.k * spec.b;
        for (std::size_t t = data_frames; t-- > 0;) {
            std::uint64_t fidx = rem & ((std::uint64_t{1} << kb) - 1);
            rem >>= kb;
            Dataword d(static_cast<std::size_t>(spec.k));
            for (int i = spec.k; i-- > 0;) {
                d[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>(fidx & ((1u << spec.b) - 1));
                fidx >>= spec.b;
            }
            frames[t] = d;
        }
        const auto outputs = encode_burst(spec, parts, frames, m);
        double metric = 0.0;
        for (std::size_t t = 0; t < outputs.size(); ++t) {
            for (std::size_t i = 0; i < outputs[t].size(); ++i) {
                metric += std::norm(y[t][i] - outputs[t][i]);
            }
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = frames;
        }
    }
    return best;
}

} // namespace

TEST_CASE("extra atoms with identity blocks sums the contributions") {
    TrellisSpec spec{TrellisVariant::extra_atoms, 1, 1, 1, 1};
    TrellisParts parts;
    parts.g.rows = 1;
    parts.g.cols = 2;
    parts.g.entries = {{1, 0}, {1, 0}};
    TrellisState state;
    state.prev = {{0}};
    const Codeword v = trellis_output(spec, parts, state, {0}, bpsk());
    REQUIRE(v.size() == 1);
    CHECK(v[0] == std::complex<double>(2.0, 0.0)); // +1 from d_t, +1 from d_{t-1}
}

TEST_CASE("after_memory with an all-zero previous frame is memoryless") {
    RisStack stack = trellis_213_stack();
    stack.layer1 = MetaAtomLayer::line(1, kLambda / 2, 0.0);
    TrellisSpec spec{TrellisVariant::after_memory, 1, 2, 1, 1};
    const TrellisParts parts = build_trellis_generator(stack, spec);
    TrellisState state;
    state.prev = {{0}};
    for (std::uint8_t sym : {0, 1}) {
        const Codeword v = trellis_output(spec, parts, state, {sym}, bpsk());
        const Codeword memoryless = encode_block(parts.g, modulate({sym}, bpsk()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] == memoryless[i]);
        }
    }
}

TEST_CASE("(2,1,3) output depends on all four symbols in scope") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    TrellisState state;
    state.prev = {{0}, {1}, {0}};
    const Codeword base = trellis_output(spec, parts, state, {1}, bpsk());
    // Flip the oldest in-scope frame (d_{t-3}).
    TrellisState flipped = state;
    flipped.prev[2] = {1};
    const Codeword changed = trellis_output(spec, parts, flipped, {1}, bpsk());
    double diff = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        diff += std::abs(base[i] - changed[i]);
    }
    CHECK(diff > 1e-9);
}

TEST_CASE("frames older than mu cannot affect the output") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    // Two bursts differing only in frame 0; outputs at t >= mu + 1 match.
    std::vector<Dataword> a = {{0}, {1}, {0}, {1}, {1}, {0}};
    std::vector<Dataword> b = a;
    b[0] = {1};
    const auto va = encode_burst(spec, parts, a, bpsk());
    const auto vb = encode_burst(spec, parts, b, bpsk());
    for (std::size_t t = 4; t < va.size(); ++t) {
        for (std::size_t i = 0; i < va[t].size(); ++i) {
            CHECK(va[t][i] == vb[t][i]);
        }
    }
    // ... and differ somewhere within scope.
    double diff = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
        for (std::size_t i = 0; i < va[t].size(); ++i) {
            diff += std::abs(va[t][i] - vb[t][i]);
        }
    }
    CHECK(diff > 1e-9);
}

TEST_CASE("memoryless reduction: mu = 0 equals block encoding") {
    RisStack stack = trellis_213_stack();
    stack.layer1 = MetaAtomLayer::line(1, kLambda / 2, 0.0);
    TrellisSpec spec{TrellisVariant::extra_atoms, 1, 2, 0, 1};
    const TrellisParts parts = build_trellis_generator(stack, spec);
    TrellisState state; // empty for mu = 0
    for (std::uint8_t sym : {0, 1}) {
        const Codeword v = trellis_output(spec, parts, state, {sym}, bpsk());
        const Codeword block = encode_block(parts.g, modulate({sym}, bpsk()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] == block[i]);
        }
    }
}

TEST_CASE("ahead_memory: equal frames silence the memory surface") {
    RisStack stack = trellis_213_stack();
    stack.layer1 = MetaAtomLayer::line(1, kLambda / 2, 0.0);
    TrellisSpec spec{TrellisVariant::ahead_memory, 1, 2, 1, 1};
    const TrellisParts parts = build_trellis_generator(stack, spec);
    // d_t == d_{t-1}: s_mem = modulate(0) always; with k = 1 and BPSK the
    // data phase is +-1, so v(1,1) = -v(0,0).
    TrellisState s0, s1;
    s0.prev = {{0}};
    s1.prev = {{1}};
    const Codeword v00 = trellis_output(spec, parts, s0, {0}, bpsk());
    const Codeword v11 = trellis_output(spec, parts, s1, {1}, bpsk());
    for (std::size_t i = 0; i < v00.size(); ++i) {
        CHECK(std::abs(v11[i] + v00[i]) <= 1e-12 * (1 + std::abs(v00[i])));
    }
}

TEST_CASE("build_trellis_generator shapes and normalization for (2,1,3)") {
    const TrellisSpec spec = spec_213();
    CHECK(spec.state_count() == 8);
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    CHECK(parts.g.rows == 2);
    CHECK(parts.g.cols == 4);
    CHECK(parts.g.frobenius_norm_sq() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("trellis stacks must expand per frame") {
    RisStack stack = trellis_213_stack();
    TrellisSpec bad{TrellisVariant::extra_atoms, 2, 1, 1, 1};
    CHECK_THROWS_AS(build_trellis_generator(stack, bad), DimensionMismatch);
    TrellisSpec wrong_atoms = spec_213();
    wrong_atoms.mu = 2; // expects 3 layer-1 atoms, stack has 4
    CHECK_THROWS_AS(build_trellis_generator(stack, wrong_atoms), DimensionMismatch);
}

TEST_CASE("zero-noise Viterbi recovers the exact sequence") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Dataword> frames(10);
        for (auto& f : frames) {
            f = {static_cast<std::uint8_t>(rng() & 1)};
        }
        const auto y = encode_burst(spec, parts, frames, bpsk());
        const auto decoded = viterbi_dcc(spec, parts, bpsk(), y, 0.0);
        CHECK(decoded == frames);
    }
}

TEST_CASE("Viterbi equals the exhaustive sequence oracle on noisy bursts") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream noise = rng_substream(99, seed, 0);
        std::vector<Dataword> frames(6);
        for (auto& f : frames) {
            f = {static_cast<std::uint8_t>(noise.next_u64() & 1)};
        }
        auto y = encode_burst(spec, parts, frames, bpsk());
        for (auto& v : y) {
            awgn_inplace(v, 0.8, noise);
        }
        const auto viterbi = viterbi_dcc(spec, parts, bpsk(), y, 0.8);
        const auto oracle = brute_force_ml(spec, parts, bpsk(), y, frames.size());
        CHECK(viterbi == oracle);
    }
}

TEST_CASE("state spaces above 2^16 are refused") {
    TrellisSpec spec{TrellisVariant::extra_atoms, 1, 2, 20, 1};
    TrellisParts parts;
    parts.g.rows = 2;
    parts.g.cols = 21;
    parts.g.entries.assign(42, {1, 0});
    const std::vector<Codeword> y(21, Codeword(2));
    CHECK_THROWS_AS(viterbi_dcc(spec, parts, bpsk(), y, 1.0), StateSpaceTooLarge);
}

TEST_CASE("sequences shorter than the flush tail are rejected") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    const std::vector<Codeword> y(3, Codeword(2));
    CHECK_THROWS_AS(viterbi_dcc(spec, parts, bpsk(), y, 1.0), DimensionMismatch);
}

TEST_CASE("trellis CSV dumps one row per (state, input) branch") {
    const TrellisSpec spec = spec_213();
    const TrellisParts parts = build_trellis_generator(trellis_213_stack(), spec);
    std::stringstream out;
    write_trellis_csv(spec, parts, bpsk(), out);
    std::string line;
    std::getline(out, line);
    CHECK(line == "state,input,outputs");
    int rows = 0;
    while (std::getline(out, line)) {
        ++rows;
    }
    CHECK(rows == 8 * 2); // state_count * frame_count
}
