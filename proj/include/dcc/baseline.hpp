// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcc/codec_block.hpp"
#include "dcc/diffraction.hpp"
#include "dcc/modem.hpp"

namespace dcc {

// Systematic Hamming(7,4): codeword (d1 d2 d3 d4 p1 p2 p3) with
// p1 = d1^d2^d4, p2 = d1^d3^d4, p3 = d2^d3^d4.
namespace hamming74 {

std::array<std::uint8_t, 7> encode(const std::array<std::uint8_t, 4>& data);

// Syndrome lookup; corrects any single bit flip.
std::array<std::uint8_t, 4> decode_hard(const std::array<std::uint8_t, 7>& received);

// Soft ML over the 16 codewords under BPSK observations; ties toward the
// lower codeword index.
std::array<std::uint8_t, 4> decode_soft(std::span<const std::complex<double>> y);

// Parity-check H * c^T over GF(2); zero syndrome iff c is a codeword.
std::array<std::uint8_t, 3> syndrome(const std::array<std::uint8_t, 7>& word);

// Stream helpers: zero-pad to a multiple of 4 data bits.
std::vector<std::uint8_t> encode_stream(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> decode_stream_hard(std::span<const std::uint8_t> coded);

} // namespace hamming74

// Rate-1/2 convolutional code, memory 3, generators (13, 17) octal:
// g1 = 1 + D^2 + D^3, g2 = 1 + D + D^2 + D^3. Zero-terminated with 3 flush
// bits.
namespace conv213 {

inline constexpr int kMemory = 3;

// message -> 2*(message.size() + 3) coded bits.
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message);

// Hamming-metric Viterbi; ties toward the zero branch.
std::vector<std::uint8_t> viterbi_hard(std::span<const std::uint8_t> coded);

// Euclidean-metric Viterbi over BPSK observations (real parts carry the
// signal); ties toward the zero branch.
std::vector<std::uint8_t> viterbi_soft(std::span<const std::complex<double>> observations);

// Minimum output weight over all nonzero paths re-merging within max_depth
// input steps.
int free_distance(int max_depth = 12);

} // namespace conv213

// Hamming(7,4) followed by block DCC: each 7-bit codeword is zero-padded to
// a whole number of datawords and encoded frame by frame.
struct ConcatCodec {
    const GeneratorMatrix* g;
    const ModulationScheme* m;

    std::size_t datawords_per_codeword() const;
    std::size_t pad_bits_per_codeword() const;
    // Nominal rate metadata: (4/7) * cols/rows.
    double nominal_rate() const;

    // 4 info bits -> datawords_per_codeword() frames of g->rows symbols.
    std::vector<Codeword> encode_codeword(const std::array<std::uint8_t, 4>& data) const;
    // ML-detect each frame, then hard Hamming decode.
    std::array<std::uint8_t, 4> decode_codeword(std::span<const Codeword> frames,
                                                const class MlDetector& detector) const;
};

// Conformance vectors: text lines "input_bits output_bits".
void write_conformance_vectors(const std::string& path, bool hamming,
                               std::span<const std::vector<std::uint8_t>> inputs);

} // namespace dcc
