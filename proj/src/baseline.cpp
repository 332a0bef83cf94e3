// SPDX-License-Identifier: Apache-2.0

#include "dcc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "dcc/detect.hpp"
#include "dcc/errors.hpp"

namespace dcc {

namespace hamming74 {
namespace {

constexpr std::uint8_t kH[3][7] = {
    {1, 1, 0, 1, 1, 0, 0},
    {1, 0, 1, 1, 0, 1, 0},
    {0, 1, 1, 1, 0, 0, 1},
};

// syndrome (as 3-bit value s1 | s2<<1 | s3<<2) -> flipped position, or -1.
int syndrome_to_position(const std::array<std::uint8_t, 3>& s) {
    static const auto map = [] {
        std::array<int, 8> m;
        m.fill(-1);
        for (int pos = 0; pos < 7; ++pos) {
            std::array<std::uint8_t, 7> e{};
            e[static_cast<std::size_t>(pos)] = 1;
            const auto sy = syndrome(e);
            m[static_cast<std::size_t>(sy[0] | (sy[1] << 1) | (sy[2] << 2))] = pos;
        }
        return m;
    }();
    return map[static_cast<std::size_t>(s[0] | (s[1] << 1) | (s[2] << 2))];
}

} // namespace

std::array<std::uint8_t, 7> encode(const std::array<std::uint8_t, 4>& d) {
    return {d[0], d[1], d[2], d[3],
            static_cast<std::uint8_t>(d[0] ^ d[1] ^ d[3]),
            static_cast<std::uint8_t>(d[0] ^ d[2] ^ d[3]),
            static_cast<std::uint8_t>(d[1] ^ d[2] ^ d[3])};
}

std::array<std::uint8_t, 3> syndrome(const std::array<std::uint8_t, 7>& word) {
    std::array<std::uint8_t, 3> s{};
    for (int row = 0; row < 3; ++row) {
        std::uint8_t acc = 0;
        for (int i = 0; i < 7; ++i) {
            acc ^= static_cast<std::uint8_t>(kH[row][i] & word[static_cast<std::size_t>(i)]);
        }
        s[static_cast<std::size_t>(row)] = static_cast<std::uint8_t>(acc & 1);
    }
    return s;
}

std::array<std::uint8_t, 4> decode_hard(const std::array<std::uint8_t, 7>& received) {
    std::array<std::uint8_t, 7> c = received;
    const int pos = syndrome_to_position(syndrome(c));
    if (pos >= 0) {
        c[static_cast<std::size_t>(pos)] ^= 1;
    }
    return {c[0], c[1], c[2], c[3]};
}

std::array<std::uint8_t, 4> decode_soft(std::span<const std::complex<double>> y) {
    if (y.size() != 7) {
        throw DimensionMismatch("soft Hamming decoding needs 7 observations");
    }
    double best = std::numeric_limits<double>::infinity();
    std::array<std::uint8_t, 4> best_d{};
    for (int idx = 0; idx < 16; ++idx) {
        const std::array<std::uint8_t, 4> d = {
            static_cast<std::uint8_t>((idx >> 3) & 1), static_cast<std::uint8_t>((idx >> 2) & 1),
            static_cast<std::uint8_t>((idx >> 1) & 1), static_cast<std::uint8_t>(idx & 1)};
        const auto c = encode(d);
        double metric = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double x = c[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
            metric += std::norm(y[static_cast<std::size_t>(i)] - x);
        }
        if (metric < best) {
            best = metric;
            best_d = d;
        }
    }
    return best_d;
}

std::vector<std::uint8_t> encode_stream(std::span<const std::uint8_t> bits) {
    const std::size_t blocks = (bits.size() + 3) / 4;
    std::vector<std::uint8_t> out;
    out.reserve(blocks * 7);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        std::array<std::uint8_t, 4> d{};
        for (std::size_t i = 0; i < 4; ++i) {
            const std::size_t pos = blk * 4 + i;
            d[i] = pos < bits.size() ? (bits[pos] & 1) : 0;
        }
        const auto c = encode(d);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

std::vector<std::uint8_t> decode_stream_hard(std::span<const std::uint8_t> coded) {
    if (coded.size() % 7 != 0) {
        throw DimensionMismatch("coded stream length must be a multiple of 7");
    }
    std::vector<std::uint8_t> out;
    out.reserve(coded.size() / 7 * 4);
    for (std::size_t blk = 0; blk < coded.size() / 7; ++blk) {
        std::array<std::uint8_t, 7> r{};
        std::copy_n(coded.begin() + static_cast<std::ptrdiff_t>(blk * 7), 7, r.begin());
        const auto d = decode_hard(r);
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

} // namespace hamming74

namespace conv213 {
namespace {

// State = last 3 inputs, most recent in bit 0.
inline std::pair<std::uint8_t, std::uint8_t> taps(int state, int u) {
    const int u1 = state & 1;
    const int u2 = (state >> 1) & 1;
    const int u3 = (state >> 2) & 1;
    return {static_cast<std::uint8_t>(u ^ u2 ^ u3),
            static_cast<std::uint8_t>(u ^ u1 ^ u2 ^ u3)};
}

inline int next_state(int state, int u) {
    return ((state << 1) | u) & 0b111;
}

template <typename Metric>
std::vector<std::uint8_t> viterbi(std::size_t n_steps, Metric&& branch_metric,
                                  std::size_t message_len) {
    constexpr int S = 8;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> metric(S, inf), next_metric(S, inf);
    std::vector<std::vector<std::uint8_t>> hist(S), next_hist(S);
    metric[0] = 0.0;
    for (std::size_t t = 0; t < n_steps; ++t) {
        const bool flush = t >= message_len;
        std::fill(next_metric.begin(), next_metric.end(), inf);
        for (auto& h : next_hist) {
            h.clear();
        }
        for (int s = 0; s < S; ++s) {
            if (metric[static_cast<std::size_t>(s)] == inf) {
                continue;
            }
            // Input 0 is tried first, so exact ties keep the zero branch.
            for (int u = 0; u <= (flush ? 0 : 1); ++u) {
                const auto [o1, o2] = taps(s, u);
                const double cand =
                    metric[static_cast<std::size_t>(s)] + branch_metric(t, o1, o2);
                const int ns = next_state(s, u);
                if (cand < next_metric[static_cast<std::size_t>(ns)]) {
                    next_metric[static_cast<std::size_t>(ns)] = cand;
                    next_hist[static_cast<std::size_t>(ns)] = hist[static_cast<std::size_t>(s)];
                    next_hist[static_cast<std::size_t>(ns)].push_back(
                        static_cast<std::uint8_t>(u));
                }
            }
        }
        metric.swap(next_metric);
        hist.swap(next_hist);
    }
    std::vector<std::uint8_t> out = hist[0];
    out.resize(message_len);
    return out;
}

} // namespace

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message) {
    std::vector<std::uint8_t> out;
    out.reserve(2 * (message.size() + kMemory));
    int state = 0;
    auto push = [&](int u) {
        const auto [o1, o2] = taps(state, u);
        out.push_back(o1);
        out.push_back(o2);
        state = next_state(state, u);
    };
    for (std::uint8_t b : message) {
        push(b & 1);
    }
    for (int i = 0; i < kMemory; ++i) {
        push(0);
    }
    return out;
}

std::vector<std::uint8_t> viterbi_hard(std::span<const std::uint8_t> coded) {
    if (coded.size() % 2 != 0 || coded.size() < 2 * kMemory) {
        throw DimensionMismatch("coded stream must hold 2 bits per step incl. 3 flush steps");
    }
    const std::size_t n_steps = coded.size() / 2;
    const std::size_t message_len = n_steps - kMemory;
    return viterbi(
        n_steps,
        [&](std::size_t t, std::uint8_t o1, std::uint8_t o2) {
            return static_cast<double>((coded[2 * t] ^ o1) + (coded[2 * t + 1] ^ o2));
        },
        message_len);
}

std::vector<std::uint8_t> viterbi_soft(std::span<const std::complex<double>> observations) {
    if (observations.size() % 2 != 0 || observations.size() < 2 * kMemory) {
        throw DimensionMismatch("observation stream must hold 2 symbols per step");
    }
    const std::size_t n_steps = observations.size() / 2;
    const std::size_t message_len = n_steps - kMemory;
    return viterbi(
        n_steps,
        [&](std::size_t t, std::uint8_t o1, std::uint8_t o2) {
            const double x1 = o1 ? -1.0 : 1.0;
            const double x2 = o2 ? -1.0 : 1.0;
            return std::norm(observations[2 * t] - x1) + std::norm(observations[2 * t + 1] - x2);
        },
        message_len);
}

int free_distance(int max_depth) {
    // Depth-first over paths that leave the zero state once; prune on the
    // best weight found so far.
    int best = std::numeric_limits<int>::max();
    struct Node {
        int state;
        int weight;
        int depth;
    };
    std::vector<Node> stack;
    {
        const auto [o1, o2] = taps(0, 1);
        stack.push_back({next_state(0, 1), o1 + o2, 1});
    }
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        if (node.state == 0) {
            best = std::min(best, node.weight);
            continue;
        }
        if (node.depth >= max_depth || node.weight >= best) {
            continue;
        }
        for (int u = 0; u <= 1; ++u) {
            const auto [o1, o2] = taps(node.state, u);
            stack.push_back({next_state(node.state, u), node.weight + o1 + o2, node.depth + 1});
        }
    }
    return best;
}

} // namespace conv213

std::size_t ConcatCodec::datawords_per_codeword() const {
    const std::size_t bits_per_dataword =
        g->cols * static_cast<std::size_t>(m->bits_per_symbol);
    return (7 + bits_per_dataword - 1) / bits_per_dataword;
}

std::size_t ConcatCodec::pad_bits_per_codeword() const {
    const std::size_t bits_per_dataword =
        g->cols * static_cast<std::size_t>(m->bits_per_symbol);
    return datawords_per_codeword() * bits_per_dataword - 7;
}

double ConcatCodec::nominal_rate() const {
    return (4.0 / 7.0) * static_cast<double>(g->cols) / static_cast<double>(g->rows);
}

std::vector<Codeword> ConcatCodec::encode_codeword(const std::array<std::uint8_t, 4>& data) const {
    const auto coded = hamming74::encode(data);
    const std::vector<std::uint8_t> bits(coded.begin(), coded.end());
    const SegmentedBits seg = bits_to_datawords(bits, *m, g->cols);
    std::vector<Codeword> frames;
    frames.reserve(seg.blocks.size());
    for (const Dataword& d : seg.blocks) {
        frames.push_back(encode_block(*g, modulate(d, *m)));
    }
    return frames;
}

std::array<std::uint8_t, 4> ConcatCodec::decode_codeword(std::span<const Codeword> frames,
                                                         const MlDetector& detector) const {
    if (frames.size() != datawords_per_codeword()) {
        throw DimensionMismatch("concat decode: wrong frame count for one codeword");
    }
    std::vector<std::uint8_t> bits;
    for (const Codeword& y : frames) {
        const Dataword d = detector.detect(y);
        const auto frame_bits = dataword_to_bits(d, *m);
        bits.insert(bits.end(), frame_bits.begin(), frame_bits.end());
    }
    std::array<std::uint8_t, 7> r{};
    std::copy_n(bits.begin(), 7, r.begin());
    return hamming74::decode_hard(r);
}

void write_conformance_vectors(const std::string& path, bool hamming,
                               std::span<const std::vector<std::uint8_t>> inputs) {
    std::ofstream out(path);
    if (!out) {
        throw FileFormatError("cannot write conformance vectors: " + path);
    }
    for (const auto& in_bits : inputs) {
        std::vector<std::uint8_t> out_bits;
        if (hamming) {
            out_bits = hamming74::encode_stream(in_bits);
        } else {
            out_bits = conv213::encode(in_bits);
        }
        for (std::uint8_t b : in_bits) {
            out << static_cast<int>(b);
        }
        out << ' ';
        for (std::uint8_t b : out_bits) {
            out << static_cast<int>(b);
        }
        out << '\n';
    }
}

} // namespace dcc
