// SPDX-License-Identifier: Apache-2.0

#include "dcc/codec_block.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

namespace dcc {
namespace {

// Advances d through datawords in lexicographic order; false after the last.
bool next_dataword(Dataword& d, std::size_t order) {
    for (std::size_t i = d.size(); i-- > 0;) {
        if (static_cast<std::size_t>(d[i]) + 1 < order) {
            ++d[i];
            std::fill(d.begin() + static_cast<std::ptrdiff_t>(i) + 1, d.end(), 0);
            return true;
        }
    }
    return false;
}

double codeword_distance(const Codeword& a, const Codeword& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::norm(a[i] - b[i]);
    }
    return std::sqrt(acc);
}

} // namespace

Codeword encode_block(const GeneratorMatrix& g, std::span<const std::complex<double>> s) {
    if (s.size() != g.cols) {
        throw DimensionMismatch("encode_block: signal length " + std::to_string(s.size()) +
                                " != generator columns " + std::to_string(g.cols));
    }
    Codeword v(g.rows);
    kernels::cmatvec(g.entries.data(), g.rows, g.cols, s.data(), v.data());
    return v;
}

std::vector<CodebookEntry> enumerate_codebook(const GeneratorMatrix& g,
                                              const ModulationScheme& m) {
    const std::size_t total_bits = g.cols * static_cast<std::size_t>(m.bits_per_symbol);
    if (total_bits > 20) {
        throw SearchSpaceTooLarge("codebook of 2^" + std::to_string(total_bits) +
                                  " entries exceeds the exhaustive bound 2^20");
    }
    std::vector<CodebookEntry> book;
    book.reserve(std::size_t{1} << total_bits);
    Dataword d(g.cols, 0);
    do {
        book.push_back({d, encode_block(g, modulate(d, m))});
    } while (next_dataword(d, m.order()));
    return book;
}

DistanceSpectrum distance_spectrum(std::span<const CodebookEntry> codebook) {
    if (codebook.size() < 2) {
        throw InvalidArgument("distance spectrum needs at least two codewords");
    }
    DistanceSpectrum spec;
    spec.distances.reserve(codebook.size() * (codebook.size() - 1) / 2);
    bool first = true;
    for (std::size_t a = 0; a < codebook.size(); ++a) {
        for (std::size_t b = a + 1; b < codebook.size(); ++b) {
            const double dist = codeword_distance(codebook[a].codeword, codebook[b].codeword);
            spec.distances.push_back(dist);
            if (first || dist < spec.d_min) {
                first = false;
                spec.d_min = dist;
                spec.argmin_pair = {codebook[a].dataword, codebook[b].dataword};
            }
        }
    }
    return spec;
}

DistanceSpectrum sample_distance_spectrum(const GeneratorMatrix& g, const ModulationScheme& m,
                                          std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> sym(0, static_cast<int>(m.order()) - 1);
    DistanceSpectrum spec;
    spec.is_estimate = true;
    spec.distances.reserve(samples);
    bool first = true;
    for (std::size_t it = 0; it < samples; ++it) {
        Dataword a(g.cols), b(g.cols);
        do {
            for (auto& x : a) x = static_cast<std::uint8_t>(sym(rng));
            for (auto& x : b) x = static_cast<std::uint8_t>(sym(rng));
        } while (a == b);
        const Codeword va = encode_block(g, modulate(a, m));
        const Codeword vb = encode_block(g, modulate(b, m));
        const double dist = codeword_distance(va, vb);
        spec.distances.push_back(dist);
        if (first || dist < spec.d_min) {
            first = false;
            spec.d_min = dist;
            spec.argmin_pair = {a, b};
        }
    }
    return spec;
}

double decoding_radius(const DistanceSpectrum& spectrum) {
    if (spectrum.d_min <= 0.0) {
        throw ZeroDistance("two codewords coincide; the code is non-injective");
    }
    return spectrum.d_min / 2.0;
}

double code_rate(const GeneratorMatrix& g) {
    return static_cast<double>(g.cols) / static_cast<double>(g.rows);
}

std::string format_dataword(const Dataword& d) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(d.size());
    for (std::uint8_t sym : d) {
        s += digits[sym & 0xF];
    }
    return s;
}

void write_distance_csv(std::span<const CodebookEntry> codebook, const DistanceSpectrum& spectrum,
                        std::ostream& out) {
    out << "dataword_a,dataword_b,distance\n";
    char buf[64];
    std::size_t idx = 0;
    for (std::size_t a = 0; a < codebook.size(); ++a) {
        for (std::size_t b = a + 1; b < codebook.size(); ++b, ++idx) {
            std::snprintf(buf, sizeof(buf), "%.17g", spectrum.distances[idx]);
            out << format_dataword(codebook[a].dataword) << ','
                << format_dataword(codebook[b].dataword) << ',' << buf << '\n';
        }
    }
    std::snprintf(buf, sizeof(buf), "%.17g", spectrum.d_min);
    out << "d_min," << format_dataword(spectrum.argmin_pair.first) << ':'
        << format_dataword(spectrum.argmin_pair.second) << ',' << buf << '\n';
}

} // namespace dcc
