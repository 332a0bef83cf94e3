// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "dcc/diffraction.hpp"
#include "dcc/modem.hpp"

namespace dcc {

using Codeword = std::vector<std::complex<double>>;

// v = G * s. Throws DimensionMismatch.
Codeword encode_block(const GeneratorMatrix& g, std::span<const std::complex<double>> s);

struct CodebookEntry {
    Dataword dataword;
    Codeword codeword;
};

// All 2^(cols*b) (dataword, codeword) pairs in lexicographic dataword order.
// Refuses spaces above 2^20 entries with SearchSpaceTooLarge.
std::vector<CodebookEntry> enumerate_codebook(const GeneratorMatrix& g,
                                              const ModulationScheme& m);

struct DistanceSpectrum {
    // Pairwise distances in lexicographic (a, b) pair order, a < b.
    std::vector<double> distances;
    double d_min = 0.0;
    std::pair<Dataword, Dataword> argmin_pair;
    // Set when the spectrum was sampled rather than enumerated.
    bool is_estimate = false;
};

// Exhaustive pairwise Euclidean distances; the argmin pair is the
// lexicographically smallest pair achieving d_min.
DistanceSpectrum distance_spectrum(std::span<const CodebookEntry> codebook);

// Monte-Carlo estimate for codes too large to enumerate: samples random
// dataword pairs. d_min is an upper bound on the true minimum.
DistanceSpectrum sample_distance_spectrum(const GeneratorMatrix& g, const ModulationScheme& m,
                                          std::size_t samples, std::uint64_t seed);

// d_min / 2. Throws ZeroDistance when two codewords coincide.
double decoding_radius(const DistanceSpectrum& spectrum);

// (K*L)/(M*N) bookkeeping value.
double code_rate(const GeneratorMatrix& g);

// CSV "dataword_a,dataword_b,distance" rows, one trailing d_min summary row.
void write_distance_csv(std::span<const CodebookEntry> codebook, const DistanceSpectrum& spectrum,
                        std::ostream& out);

// Hex rendering of a dataword's symbols (one digit per symbol).
std::string format_dataword(const Dataword& d);

} // namespace dcc
