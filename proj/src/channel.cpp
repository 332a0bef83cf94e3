// SPDX-License-Identifier: Apache-2.0

#include "dcc/channel.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "dcc/errors.hpp"

namespace dcc {
namespace {

// splitmix64 finalizer; decorrelates consecutive labels.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

RngStream rng_substream(std::uint64_t master_seed, std::uint64_t label_a, std::uint64_t label_b) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ label_a);
    h = mix64(h ^ label_b);
    return RngStream(h);
}

void awgn_inplace(std::span<std::complex<double>> x, double n0, RngStream& rng) {
    if (n0 < 0.0) {
        throw InvalidArgument("noise variance must be non-negative");
    }
    if (n0 == 0.0) {
        return;
    }
    const double sigma = std::sqrt(n0 / 2.0);
    for (auto& v : x) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        v += std::complex<double>(sigma * re, sigma * im);
    }
}

std::vector<std::complex<double>> awgn(std::span<const std::complex<double>> x, double n0,
                                       RngStream& rng) {
    std::vector<std::complex<double>> y(x.begin(), x.end());
    awgn_inplace(y, n0, rng);
    return y;
}

ChannelSpec ChannelSpec::make(double eb_n0_db, double bits_per_frame, double energy_per_frame) {
    if (!(bits_per_frame > 0.0) || !(energy_per_frame > 0.0)) {
        throw ConfigError("frame bit count and energy must be positive");
    }
    ChannelSpec spec;
    spec.eb_n0_db = eb_n0_db;
    spec.bits_per_frame = bits_per_frame;
    spec.energy_per_frame = energy_per_frame;
    const double eb = energy_per_frame / bits_per_frame;
    spec.n0 = eb * std::pow(10.0, -eb_n0_db / 10.0);
    return spec;
}

void write_ber_csv(const BerCurve& curve, std::ostream& out) {
    write_ber_csv(std::span<const BerCurve>(&curve, 1), out);
}

void write_ber_csv(std::span<const BerCurve> curves, std::ostream& out) {
    out << "scheme,detector,modulation,geometry_digest,seed,eb_n0_db,frames,bit_errors,ber,ci95\n";
    char buf[256];
    for (const BerCurve& curve : curves) {
        for (const BerPoint& p : curve.points) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%llu,%.12g,%llu,%llu,%.12g,%.12g\n",
                          curve.scheme.c_str(), curve.detector.c_str(),
                          curve.modulation.c_str(), curve.geometry_digest.c_str(),
                          static_cast<unsigned long long>(curve.seed), p.eb_n0_db,
                          static_cast<unsigned long long>(p.frames),
                          static_cast<unsigned long long>(p.bit_errors), p.ber, p.ci95);
            out << buf;
        }
    }
}

} // namespace dcc
