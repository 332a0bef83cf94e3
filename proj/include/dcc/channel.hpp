// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dcc {

// Seeded random stream; every stream used by the harness derives from the
// master seed through rng_substream, never from ambient entropy.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform() { return uniform_(engine_); }
    double gaussian() { return normal_(engine_); }
    int uniform_int(int upper_exclusive) {
        return static_cast<int>(engine_() % static_cast<std::uint64_t>(upper_exclusive));
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Counter-style substream derivation: mixes (master_seed, label_a, label_b)
// into an independent, reproducible stream. Determinism is within-artifact;
// no cross-language stream contract is promised.
RngStream rng_substream(std::uint64_t master_seed, std::uint64_t label_a, std::uint64_t label_b);

// y = x + n with n circularly-symmetric complex Gaussian of variance n0 per
// complex entry (n0/2 per real dimension). n0 = 0 passes x through.
void awgn_inplace(std::span<std::complex<double>> x, double n0, RngStream& rng);
std::vector<std::complex<double>> awgn(std::span<const std::complex<double>> x, double n0,
                                       RngStream& rng);

struct ChannelSpec {
    double eb_n0_db = 0.0;
    double n0 = 0.0;
    double bits_per_frame = 0.0;
    double energy_per_frame = 0.0;

    // Eb = energy_per_frame / bits_per_frame, N0 = Eb * 10^(-eb_n0_db/10).
    static ChannelSpec make(double eb_n0_db, double bits_per_frame, double energy_per_frame);
};

struct BerPoint {
    double eb_n0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;
    // Mean simulated frame energy; not part of the CSV contract.
    double mean_frame_energy = 0.0;
};

struct BerCurve {
    std::string scheme;
    std::string detector;
    std::string modulation;
    std::string geometry_digest;
    std::uint64_t seed = 0;
    std::size_t bits_per_frame = 0;
    std::vector<BerPoint> points;
};

// CSV with the fixed header
// scheme,detector,modulation,geometry_digest,seed,eb_n0_db,frames,bit_errors,ber,ci95
// one row per SNR point in ascending order.
void write_ber_csv(const BerCurve& curve, std::ostream& out);
void write_ber_csv(std::span<const BerCurve> curves, std::ostream& out);

} // namespace dcc
