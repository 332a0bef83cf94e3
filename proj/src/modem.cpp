// SPDX-License-Identifier: Apache-2.0

#include "dcc/modem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dcc/errors.hpp"

namespace dcc {
namespace {

ModulationScheme make_bpsk() {
    return {SchemeName::bpsk, 1, {{1.0, 0.0}, {-1.0, 0.0}}};
}

ModulationScheme make_qpsk() {
    const double s = 1.0 / std::sqrt(2.0);
    ModulationScheme m{SchemeName::qpsk, 2, {}};
    m.constellation.resize(4);
    for (int sym = 0; sym < 4; ++sym) {
        const double re = (sym & 0b10) ? -s : s;
        const double im = (sym & 0b01) ? -s : s;
        m.constellation[sym] = {re, im};
    }
    return m;
}

ModulationScheme make_qam16() {
    // Per-axis Gray sequence 00,01,11,10 onto ascending levels.
    const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    const int gray_to_level[4] = {0, 1, 3, 2}; // bit pair -> level index
    const double s = 1.0 / std::sqrt(10.0);
    ModulationScheme m{SchemeName::qam16, 4, {}};
    m.constellation.resize(16);
    for (int sym = 0; sym < 16; ++sym) {
        const int ibits = (sym >> 2) & 0b11;
        const int qbits = sym & 0b11;
        m.constellation[sym] = {levels[gray_to_level[ibits]] * s,
                                levels[gray_to_level[qbits]] * s};
    }
    return m;
}

} // namespace

const ModulationScheme& ModulationScheme::get(SchemeName name) {
    static const ModulationScheme bpsk = make_bpsk();
    static const ModulationScheme qpsk = make_qpsk();
    static const ModulationScheme qam16 = make_qam16();
    switch (name) {
    case SchemeName::bpsk: return bpsk;
    case SchemeName::qpsk: return qpsk;
    case SchemeName::qam16: return qam16;
    }
    throw ConfigError("unknown modulation scheme");
}

const ModulationScheme& ModulationScheme::by_name(const std::string& name) {
    std::string lower;
    for (char c : name) {
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (lower == "bpsk") return get(SchemeName::bpsk);
    if (lower == "qpsk") return get(SchemeName::qpsk);
    if (lower == "qam16" || lower == "16qam") return get(SchemeName::qam16);
    throw ConfigError("unknown modulation scheme: " + name);
}

const char* ModulationScheme::label() const {
    switch (name) {
    case SchemeName::bpsk: return "bpsk";
    case SchemeName::qpsk: return "qpsk";
    case SchemeName::qam16: return "qam16";
    }
    return "unknown";
}

std::vector<std::complex<double>> modulate(const Dataword& d, const ModulationScheme& m) {
    std::vector<std::complex<double>> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] >= m.order()) {
            throw SymbolOutOfRange("symbol " + std::to_string(d[i]) + " out of range for " +
                                   m.label());
        }
        out[i] = m.constellation[d[i]];
    }
    return out;
}

Dataword slice(std::span<const std::complex<double>> y, const ModulationScheme& m) {
    Dataword out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::size_t best = 0;
        double best_d = std::norm(y[i] - m.constellation[0]);
        for (std::size_t sym = 1; sym < m.order(); ++sym) {
            const double d = std::norm(y[i] - m.constellation[sym]);
            if (d < best_d) {
                best_d = d;
                best = sym;
            }
        }
        out[i] = static_cast<std::uint8_t>(best);
    }
    return out;
}

SegmentedBits bits_to_datawords(std::span<const std::uint8_t> bits, const ModulationScheme& m,
                                std::size_t block_len) {
    const std::size_t b = static_cast<std::size_t>(m.bits_per_symbol);
    const std::size_t block_bits = b * block_len;
    SegmentedBits out;
    if (block_bits == 0) {
        throw InvalidArgument("block length must be positive");
    }
    const std::size_t blocks = (bits.size() + block_bits - 1) / block_bits;
    out.pad_bits = blocks * block_bits - bits.size();
    out.blocks.reserve(blocks);
    std::size_t pos = 0;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        Dataword d(block_len, 0);
        for (std::size_t s = 0; s < block_len; ++s) {
            std::uint8_t sym = 0;
            for (std::size_t k = 0; k < b; ++k, ++pos) {
                const std::uint8_t bit = pos < bits.size() ? bits[pos] : 0;
                sym = static_cast<std::uint8_t>((sym << 1) | (bit & 1));
            }
            d[s] = sym;
        }
        out.blocks.push_back(std::move(d));
    }
    return out;
}

std::vector<std::uint8_t> datawords_to_bits(std::span<const Dataword> blocks,
                                            const ModulationScheme& m, std::size_t pad_bits) {
    std::vector<std::uint8_t> bits;
    for (const Dataword& d : blocks) {
        const auto block_bits = dataword_to_bits(d, m);
        bits.insert(bits.end(), block_bits.begin(), block_bits.end());
    }
    if (pad_bits > bits.size()) {
        throw InvalidArgument("pad count exceeds total bit count");
    }
    bits.resize(bits.size() - pad_bits);
    return bits;
}

std::vector<std::uint8_t> dataword_to_bits(const Dataword& d, const ModulationScheme& m) {
    const std::size_t b = static_cast<std::size_t>(m.bits_per_symbol);
    std::vector<std::uint8_t> bits;
    bits.reserve(d.size() * b);
    for (std::uint8_t sym : d) {
        for (std::size_t k = 0; k < b; ++k) {
            bits.push_back(static_cast<std::uint8_t>((sym >> (b - 1 - k)) & 1));
        }
    }
    return bits;
}

Dataword bits_to_dataword(std::span<const std::uint8_t> bits, const ModulationScheme& m) {
    const std::size_t b = static_cast<std::size_t>(m.bits_per_symbol);
    if (bits.size() % b != 0) {
        throw InvalidArgument("bit count not a multiple of bits per symbol");
    }
    Dataword d(bits.size() / b, 0);
    for (std::size_t s = 0; s < d.size(); ++s) {
        std::uint8_t sym = 0;
        for (std::size_t k = 0; k < b; ++k) {
            sym = static_cast<std::uint8_t>((sym << 1) | (bits[s * b + k] & 1));
        }
        d[s] = sym;
    }
    return d;
}

void write_constellation_csv(const ModulationScheme& m, std::ostream& out) {
    out << "symbol,re,im,bit_label\n";
    char buf[96];
    for (std::size_t sym = 0; sym < m.order(); ++sym) {
        std::string label;
        for (int k = m.bits_per_symbol; k-- > 0;) {
            label += static_cast<char>('0' + ((sym >> k) & 1));
        }
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%s\n", sym,
                      m.constellation[sym].real(), m.constellation[sym].imag(), label.c_str());
        out << buf;
    }
}

} // namespace dcc
