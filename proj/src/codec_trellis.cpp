// SPDX-License-Identifier: Apache-2.0

#include "dcc/codec_trellis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

namespace dcc {
namespace {

void check_spec(const TrellisSpec& spec, const ModulationScheme& m) {
    if (spec.k <= 0 || spec.n <= 0 || spec.mu < 0 || spec.b <= 0) {
        throw InvalidArgument("trellis spec dimensions must be positive (mu >= 0)");
    }
    if (m.bits_per_symbol != spec.b) {
        throw DimensionMismatch("modulation has " + std::to_string(m.bits_per_symbol) +
                                " bits/symbol but trellis spec declares " +
                                std::to_string(spec.b));
    }
}

// Integer -> frame, big-endian symbol order so numeric order is
// lexicographic dataword order.
Dataword index_to_frame(std::uint64_t idx, int k, int b) {
    Dataword d(static_cast<std::size_t>(k));
    const std::uint64_t mask = (std::uint64_t{1} << b) - 1;
    for (int i = k; i-- > 0;) {
        d[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(idx & mask);
        idx >>= b;
    }
    return d;
}

// Unit-modulus phase diagonal from a frame's bits, {0, pi} per bit, repeated
// cyclically across `width` outputs.
std::vector<std::complex<double>> phase_diagonal(const Dataword& frame,
                                                 const ModulationScheme& m, std::size_t width) {
    const auto bits = dataword_to_bits(frame, m);
    std::vector<std::complex<double>> diag(width);
    for (std::size_t j = 0; j < width; ++j) {
        diag[j] = bits[j % bits.size()] ? std::complex<double>(-1.0, 0.0)
                                        : std::complex<double>(1.0, 0.0);
    }
    return diag;
}

Dataword xor_frames(const Dataword& a, const Dataword& b) {
    Dataword out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(a[i] ^ b[i]);
    }
    return out;
}

void check_state(const TrellisSpec& spec, const TrellisState& state) {
    if (state.prev.size() != static_cast<std::size_t>(spec.mu)) {
        throw DimensionMismatch("trellis state must hold exactly mu previous frames");
    }
    for (const Dataword& f : state.prev) {
        if (f.size() != static_cast<std::size_t>(spec.k)) {
            throw DimensionMismatch("trellis state frame length != k");
        }
    }
}

} // namespace

Codeword trellis_output(const TrellisSpec& spec, const TrellisParts& parts,
                        const TrellisState& state, const Dataword& d_t,
                        const ModulationScheme& m) {
    check_spec(spec, m);
    check_state(spec, state);
    if (d_t.size() != static_cast<std::size_t>(spec.k)) {
        throw DimensionMismatch("trellis input frame length != k");
    }

    switch (spec.variant) {
    case TrellisVariant::extra_atoms: {
        const std::size_t width = static_cast<std::size_t>(spec.k) *
                                  static_cast<std::size_t>(spec.mu + 1);
        if (parts.g.cols != width || parts.g.rows != static_cast<std::size_t>(spec.n)) {
            throw DimensionMismatch("extra_atoms generator must be n x k(mu+1)");
        }
        std::vector<std::complex<double>> u;
        u.reserve(width);
        const auto s_now = modulate(d_t, m);
        u.insert(u.end(), s_now.begin(), s_now.end());
        for (const Dataword& f : state.prev) {
            const auto s = modulate(f, m);
            u.insert(u.end(), s.begin(), s.end());
        }
        Codeword v(parts.g.rows);
        kernels::cmatvec(parts.g.entries.data(), parts.g.rows, parts.g.cols, u.data(), v.data());
        return v;
    }
    case TrellisVariant::after_memory: {
        if (spec.mu != 1) {
            throw DimensionMismatch("after_memory uses exactly the last frame (mu = 1)");
        }
        if (parts.g.cols != static_cast<std::size_t>(spec.k) ||
            parts.g.rows != static_cast<std::size_t>(spec.n)) {
            throw DimensionMismatch("after_memory generator must be n x k");
        }
        const auto s_now = modulate(d_t, m);
        Codeword v(parts.g.rows);
        kernels::cmatvec(parts.g.entries.data(), parts.g.rows, parts.g.cols, s_now.data(),
                         v.data());
        const auto diag = phase_diagonal(state.prev[0], m, v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] *= diag[i];
        }
        return v;
    }
    case TrellisVariant::ahead_memory: {
        if (spec.mu != 1) {
            throw DimensionMismatch("ahead_memory uses exactly the last frame (mu = 1)");
        }
        const std::size_t k = static_cast<std::size_t>(spec.k);
        if (parts.memory_to_data.rows != k || parts.memory_to_data.cols != k ||
            parts.g.cols != k || parts.g.rows != static_cast<std::size_t>(spec.n)) {
            throw DimensionMismatch("ahead_memory needs D (k x k) and G (n x k)");
        }
        const auto s_mem = modulate(xor_frames(d_t, state.prev[0]), m);
        std::vector<std::complex<double>> at_data(k);
        kernels::cmatvec(parts.memory_to_data.entries.data(), k, k, s_mem.data(),
                         at_data.data());
        const auto diag = phase_diagonal(d_t, m, k);
        for (std::size_t i = 0; i < k; ++i) {
            at_data[i] *= diag[i];
        }
        Codeword v(parts.g.rows);
        kernels::cmatvec(parts.g.entries.data(), parts.g.rows, parts.g.cols, at_data.data(),
                         v.data());
        return v;
    }
    }
    throw UnknownVariant("unhandled trellis variant");
}

TrellisParts build_trellis_generator(const RisStack& stack, const TrellisSpec& spec,
                                     double memory_separation_m) {
    if (spec.k <= 0 || spec.n <= 0 || spec.mu < 0 || spec.b <= 0) {
        throw InvalidArgument("trellis spec dimensions must be positive (mu >= 0)");
    }
    // Dimension expansion is per frame (k < n); the block-code rule that the
    // second layer has more atoms does not apply to trellis stacks.
    if (spec.k >= spec.n) {
        throw DimensionMismatch("trellis code must expand per frame (k < n)");
    }
    ValidationReport report = validate_stack(stack);
    std::erase_if(report.violations, [](const Violation& v) {
        return v.constraint_id == constraint::dimension_not_expanding;
    });
    if (!report.empty()) {
        throw ConstraintViolation("build_trellis_generator: stack fails validation:\n" +
                                  report.to_text());
    }

    const double lambda = stack.carrier.wavelength_m;
    TrellisParts parts;
    const std::size_t expect_l1 =
        spec.variant == TrellisVariant::extra_atoms
            ? static_cast<std::size_t>(spec.k) * static_cast<std::size_t>(spec.mu + 1)
            : static_cast<std::size_t>(spec.k);
    if (stack.layer1.count() != expect_l1 ||
        stack.layer2.count() != static_cast<std::size_t>(spec.n)) {
        throw DimensionMismatch("stack has " + std::to_string(stack.layer1.count()) + "/" +
                                std::to_string(stack.layer2.count()) +
                                " atoms but the trellis spec needs " + std::to_string(expect_l1) +
                                "/" + std::to_string(spec.n));
    }

    parts.g = assemble_coefficients(stack.layer1, stack.layer2, lambda);
    parts.g.source_stack_digest = stack_digest(stack);
    parts.g.normalization = Normalization::unit_frobenius;

    if (spec.variant == TrellisVariant::ahead_memory) {
        double sep = memory_separation_m > 0.0 ? memory_separation_m : stack.separation_m;
        MetaAtomLayer memory = stack.layer1;
        memory.plane_z = stack.layer1.plane_z - sep;
        for (Vec3& p : memory.positions) {
            p.z = memory.plane_z;
        }
        parts.memory_to_data = assemble_coefficients(memory, stack.layer1, lambda);
        // Single scale on G so the effective chain G*D has ||.||_F^2 = n.
        GeneratorMatrix chain;
        chain.rows = parts.g.rows;
        chain.cols = parts.memory_to_data.cols;
        chain.entries.resize(chain.rows * chain.cols);
        for (std::size_t i = 0; i < chain.rows; ++i) {
            for (std::size_t j = 0; j < chain.cols; ++j) {
                std::complex<double> acc = 0.0;
                for (std::size_t l = 0; l < parts.g.cols; ++l) {
                    acc += parts.g.at(i, l) * parts.memory_to_data.at(l, j);
                }
                chain.at(i, j) = acc;
            }
        }
        const double gamma =
            std::sqrt(static_cast<double>(spec.n) / chain.frobenius_norm_sq());
        for (auto& e : parts.g.entries) {
            e *= gamma;
        }
    } else {
        const double gamma =
            std::sqrt(static_cast<double>(spec.n) / parts.g.frobenius_norm_sq());
        for (auto& e : parts.g.entries) {
            e *= gamma;
        }
    }
    return parts;
}

std::vector<Dataword> viterbi_dcc(const TrellisSpec& spec, const TrellisParts& parts,
                                  const ModulationScheme& m,
                                  std::span<const Codeword> y, double noise_var) {
    check_spec(spec, m);
    if (noise_var < 0.0) {
        throw InvalidArgument("noise variance must be non-negative");
    }
    if (spec.state_count() > (std::uint64_t{1} << 16)) {
        throw StateSpaceTooLarge("trellis has 2^" + std::to_string(spec.k * spec.b * spec.mu) +
                                 " states, decoder bound is 2^16");
    }
    if (y.size() <= static_cast<std::size_t>(spec.mu)) {
        throw DimensionMismatch("received sequence shorter than the flush tail");
    }
    const std::size_t n_frames = y.size();
    const std::size_t data_frames = n_frames - static_cast<std::size_t>(spec.mu);
    const std::size_t S = static_cast<std::size_t>(spec.state_count());
    const std::size_t F = static_cast<std::size_t>(spec.frame_count());
    const std::size_t shift = static_cast<std::size_t>(spec.k) * static_cast<std::size_t>(spec.b);
    const std::uint64_t top = spec.mu > 0 ? (std::uint64_t{1} << (shift * (spec.mu - 1))) : 0;

    // State index digits are frames, most recent in the highest position.
    auto state_frames = [&](std::size_t s) {
        TrellisState st;
        st.prev.resize(static_cast<std::size_t>(spec.mu));
        std::uint64_t rem = s;
        for (int i = spec.mu; i-- > 0;) {
            st.prev[static_cast<std::size_t>(spec.mu) - 1 - static_cast<std::size_t>(i)] =
                index_to_frame((rem >> (shift * static_cast<std::size_t>(i))) &
                                   ((std::uint64_t{1} << shift) - 1),
                               spec.k, spec.b);
            rem &= (std::uint64_t{1} << (shift * static_cast<std::size_t>(i))) - 1;
        }
        return st;
    };

    // Precompute branch outputs when the table is small enough.
    std::vector<Codeword> branch;
    const bool table_ok = S * F <= (std::size_t{1} << 20);
    if (table_ok) {
        branch.resize(S * F);
        for (std::size_t s = 0; s < S; ++s) {
            const TrellisState st = state_frames(s);
            for (std::size_t f = 0; f < F; ++f) {
                branch[s * F + f] =
                    trellis_output(spec, parts, st, index_to_frame(f, spec.k, spec.b), m);
            }
        }
    }
    auto branch_output = [&](std::size_t s, std::size_t f) -> Codeword {
        if (table_ok) {
            return branch[s * F + f];
        }
        return trellis_output(spec, parts, state_frames(s), index_to_frame(f, spec.k, spec.b), m);
    };

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> metric(S, inf), next_metric(S, inf);
    std::vector<std::vector<std::uint16_t>> hist(S), next_hist(S);
    metric[0] = 0.0;

    for (std::size_t t = 0; t < n_frames; ++t) {
        const bool flush = t >= data_frames;
        std::fill(next_metric.begin(), next_metric.end(), inf);
        for (auto& h : next_hist) {
            h.clear();
        }
        for (std::size_t s = 0; s < S; ++s) {
            if (metric[s] == inf) {
                continue;
            }
            const std::size_t f_end = flush ? 1 : F;
            for (std::size_t f = 0; f < f_end; ++f) {
                const Codeword out = branch_output(s, f);
                double d = 0.0;
                for (std::size_t i = 0; i < out.size(); ++i) {
                    d += std::norm(y[t][i] - out[i]);
                }
                const double cand = metric[s] + d;
                const std::size_t ns = spec.mu == 0
                                           ? 0
                                           : static_cast<std::size_t>(f * top + (s >> shift));
                bool take = false;
                if (cand < next_metric[ns]) {
                    take = true;
                } else if (cand == next_metric[ns]) {
                    // Exact tie: prefer the lexicographically smaller input
                    // sequence.
                    const auto& cur = next_hist[ns];
                    const auto& alt = hist[s];
                    std::size_t i = 0;
                    for (; i < alt.size() && i < cur.size(); ++i) {
                        if (alt[i] != cur[i]) {
                            break;
                        }
                    }
                    if (i < cur.size() && (i == alt.size() ? f : alt[i]) < cur[i]) {
                        take = true;
                    }
                }
                if (take) {
                    next_metric[ns] = cand;
                    next_hist[ns] = hist[s];
                    next_hist[ns].push_back(static_cast<std::uint16_t>(f));
                }
            }
        }
        metric.swap(next_metric);
        hist.swap(next_hist);
    }

    // Zero flushing funnels every survivor into state 0.
    const auto& best = hist[0];
    std::vector<Dataword> decoded;
    decoded.reserve(data_frames);
    for (std::size_t t = 0; t < data_frames; ++t) {
        decoded.push_back(index_to_frame(best[t], spec.k, spec.b));
    }
    return decoded;
}

void write_trellis_csv(const TrellisSpec& spec, const TrellisParts& parts,
                       const ModulationScheme& m, std::ostream& out) {
    out << "state,input,outputs\n";
    const std::size_t S = static_cast<std::size_t>(spec.state_count());
    const std::size_t F = static_cast<std::size_t>(spec.frame_count());
    const std::size_t shift = static_cast<std::size_t>(spec.k) * static_cast<std::size_t>(spec.b);
    for (std::size_t s = 0; s < S; ++s) {
        TrellisState st;
        st.prev.resize(static_cast<std::size_t>(spec.mu));
        std::uint64_t rem = s;
        for (int i = spec.mu; i-- > 0;) {
            st.prev[static_cast<std::size_t>(spec.mu) - 1 - static_cast<std::size_t>(i)] =
                index_to_frame((rem >> (shift * static_cast<std::size_t>(i))) &
                                   ((std::uint64_t{1} << shift) - 1),
                               spec.k, spec.b);
            rem &= (std::uint64_t{1} << (shift * static_cast<std::size_t>(i))) - 1;
        }
        for (std::size_t f = 0; f < F; ++f) {
            const Codeword v = trellis_output(spec, parts, st, index_to_frame(f, spec.k, spec.b), m);
            out << s << ',' << f;
            char buf[64];
            for (const auto& c : v) {
                std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", c.real(), c.imag());
                out << buf;
            }
            out << '\n';
        }
    }
}

} // namespace dcc
