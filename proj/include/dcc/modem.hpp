// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dcc {

// A block of data symbols, each in [0, 2^b).
using Dataword = std::vector<std::uint8_t>;

enum class SchemeName {
    bpsk,
    qpsk,
    qam16,
};

// Gray-labeled unit-average-energy constellation.
//
// Labeling convention (big-endian bit order within a symbol):
//   BPSK   bit 0 -> +1, bit 1 -> -1.
//   QPSK   high bit flips the real sign, low bit the imaginary sign;
//          symbol 0 = (1+j)/sqrt(2).
//   16QAM  high two bits pick the I level, low two the Q level, each pair
//          Gray-ordered 00,01,11,10 onto levels (-3,-1,+1,+3)/sqrt(10).
struct ModulationScheme {
    SchemeName name;
    int bits_per_symbol;
    std::vector<std::complex<double>> constellation; // indexed by symbol

    std::size_t order() const { return constellation.size(); }

    static const ModulationScheme& get(SchemeName name);
    // Accepts "bpsk", "qpsk", "qam16" (case-insensitive). Throws ConfigError.
    static const ModulationScheme& by_name(const std::string& name);
    const char* label() const;
};

// Elementwise constellation lookup. Throws SymbolOutOfRange.
std::vector<std::complex<double>> modulate(const Dataword& d, const ModulationScheme& m);

// Per-symbol nearest constellation point; ties break toward the smaller
// symbol index.
Dataword slice(std::span<const std::complex<double>> y, const ModulationScheme& m);

struct SegmentedBits {
    std::vector<Dataword> blocks;
    std::size_t pad_bits = 0;
};

// Segments a bitstream into datawords of block_len symbols, b bits per
// symbol, big-endian within a symbol; the final block is zero-padded and the
// pad count recorded.
SegmentedBits bits_to_datawords(std::span<const std::uint8_t> bits, const ModulationScheme& m,
                                std::size_t block_len);

// Exact inverse of bits_to_datawords given its recorded pad count.
std::vector<std::uint8_t> datawords_to_bits(std::span<const Dataword> blocks,
                                            const ModulationScheme& m, std::size_t pad_bits);

// Bits of one dataword, big-endian per symbol.
std::vector<std::uint8_t> dataword_to_bits(const Dataword& d, const ModulationScheme& m);
Dataword bits_to_dataword(std::span<const std::uint8_t> bits, const ModulationScheme& m);

// CSV dump "symbol,re,im,bit_label", one row per constellation point.
void write_constellation_csv(const ModulationScheme& m, std::ostream& out);

} // namespace dcc
