// SPDX-License-Identifier: Apache-2.0

#include "dcc/links.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

namespace dcc {
namespace {

std::uint64_t symbol_bit_errors(const Dataword& a, const Dataword& b) {
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        errors += static_cast<std::uint64_t>(
            std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    }
    return errors;
}

Dataword random_dataword(std::size_t len, std::size_t order, RngStream& rng) {
    Dataword d(len);
    for (auto& sym : d) {
        sym = static_cast<std::uint8_t>(rng.uniform_int(static_cast<int>(order)));
    }
    return d;
}

class UncodedLink final : public LinkModel {
public:
    UncodedLink(const ModulationScheme& m, std::size_t symbols) : m_(m), symbols_(symbols) {
        if (symbols == 0) {
            throw ConfigError("uncoded link needs at least one symbol per frame");
        }
    }

    std::string scheme_label() const override { return "uncoded"; }
    std::string modulation_label() const override { return m_.label(); }
    std::size_t bits_per_frame() const override {
        return symbols_ * static_cast<std::size_t>(m_.bits_per_symbol);
    }
    double energy_per_frame() const override { return static_cast<double>(symbols_); }

    FrameOutcome simulate_frame(const LinkContext&, double n0, RngStream& rng) const override {
        const Dataword d = random_dataword(symbols_, m_.order(), rng);
        auto y = modulate(d, m_);
        const double energy = kernels::sum_abs2(y.data(), y.size());
        awgn_inplace(y, n0, rng);
        const Dataword d_hat = slice(y, m_);
        return {symbol_bit_errors(d, d_hat), energy};
    }

private:
    const ModulationScheme& m_;
    std::size_t symbols_;
};

class BlockDccLink final : public LinkModel {
public:
    BlockDccLink(GeneratorMatrix g, const ModulationScheme& m, DetectorKind kind)
        : g_(std::move(g)), m_(m), kind_(kind) {
        if (g_.rows == 0 || g_.cols == 0) {
            throw ConfigError("block DCC link needs a non-empty generator");
        }
        if (kind_ == DetectorKind::ml) {
            ml_ = std::make_unique<MlDetector>(g_, m_);
        } else if (kind_ == DetectorKind::reducer) {
            reducer_ = std::make_unique<ReducerDetector>(g_, m_);
        }
    }

    std::string scheme_label() const override { return "dcc_block"; }
    std::string detector_label() const override { return dcc::detector_label(kind_); }
    std::string modulation_label() const override { return m_.label(); }
    std::string geometry_digest() const override { return generator_digest(g_); }
    std::size_t bits_per_frame() const override {
        return g_.cols * static_cast<std::size_t>(m_.bits_per_symbol);
    }
    double energy_per_frame() const override { return static_cast<double>(g_.rows); }

    std::unique_ptr<LinkContext> prepare(double n0) const override {
        if (kind_ == DetectorKind::mmse) {
            return std::make_unique<MmseContext>(MmseDetector(g_, m_, n0));
        }
        return LinkModel::prepare(n0);
    }

    FrameOutcome simulate_frame(const LinkContext& ctx, double n0, RngStream& rng) const override {
        const Dataword d = random_dataword(g_.cols, m_.order(), rng);
        const auto s = modulate(d, m_);
        Codeword v(g_.rows);
        kernels::cmatvec(g_.entries.data(), g_.rows, g_.cols, s.data(), v.data());
        const double energy = kernels::sum_abs2(v.data(), v.size());
        awgn_inplace(v, n0, rng);
        Dataword d_hat;
        switch (kind_) {
        case DetectorKind::ml:
            d_hat = ml_->detect(v);
            break;
        case DetectorKind::mmse:
            d_hat = static_cast<const MmseContext&>(ctx).detector.detect(v);
            break;
        case DetectorKind::reducer:
            d_hat = reducer_->detect(v);
            break;
        }
        return {symbol_bit_errors(d, d_hat), energy};
    }

private:
    struct MmseContext : LinkContext {
        explicit MmseContext(MmseDetector d) : detector(std::move(d)) {}
        MmseDetector detector;
    };

    GeneratorMatrix g_;
    const ModulationScheme& m_;
    DetectorKind kind_;
    std::unique_ptr<MlDetector> ml_;
    std::unique_ptr<ReducerDetector> reducer_;
};

class TrellisDccLink final : public LinkModel {
public:
    TrellisDccLink(TrellisSpec spec, TrellisParts parts, const ModulationScheme& m,
                   std::size_t data_frames)
        : spec_(spec), parts_(std::move(parts)), m_(m), data_frames_(data_frames) {
        if (data_frames_ == 0) {
            throw ConfigError("trellis link needs at least one data frame per burst");
        }
        if (m_.bits_per_symbol != spec_.b) {
            throw ConfigError("trellis spec and modulation disagree on bits per symbol");
        }
    }

    std::string scheme_label() const override { return "dcc_trellis"; }
    std::string detector_label() const override { return "viterbi"; }
    std::string modulation_label() const override { return m_.label(); }
    std::string geometry_digest() const override { return generator_digest(parts_.g); }
    std::size_t bits_per_frame() const override {
        return data_frames_ * static_cast<std::size_t>(spec_.k) *
               static_cast<std::size_t>(spec_.b);
    }
    double energy_per_frame() const override {
        return static_cast<double>(data_frames_ + static_cast<std::size_t>(spec_.mu)) *
               static_cast<double>(spec_.n);
    }

    FrameOutcome simulate_frame(const LinkContext&, double n0, RngStream& rng) const override {
        const std::size_t total = data_frames_ + static_cast<std::size_t>(spec_.mu);
        std::vector<Dataword> frames(data_frames_);
        for (auto& f : frames) {
            f = random_dataword(static_cast<std::size_t>(spec_.k), m_.order(), rng);
        }
        TrellisState state;
        state.prev.assign(static_cast<std::size_t>(spec_.mu),
                          Dataword(static_cast<std::size_t>(spec_.k), 0));
        std::vector<Codeword> y;
        y.reserve(total);
        double energy = 0.0;
        const Dataword zero(static_cast<std::size_t>(spec_.k), 0);
        for (std::size_t t = 0; t < total; ++t) {
            const Dataword& d = t < data_frames_ ? frames[t] : zero;
            Codeword v = trellis_output(spec_, parts_, state, d, m_);
            energy += kernels::sum_abs2(v.data(), v.size());
            awgn_inplace(v, n0, rng);
            y.push_back(std::move(v));
            if (spec_.mu > 0) {
                state.prev.pop_back();
                state.prev.insert(state.prev.begin(), d);
            }
        }
        const auto decoded = viterbi_dcc(spec_, parts_, m_, y, n0);
        std::uint64_t errors = 0;
        for (std::size_t t = 0; t < data_frames_; ++t) {
            errors += symbol_bit_errors(frames[t], decoded[t]);
        }
        return {errors, energy};
    }

private:
    TrellisSpec spec_;
    TrellisParts parts_;
    const ModulationScheme& m_;
    std::size_t data_frames_;
};

class Hamming74Link final : public LinkModel {
public:
    explicit Hamming74Link(bool soft) : soft_(soft) {}

    std::string scheme_label() const override { return "hamming74"; }
    std::string detector_label() const override { return soft_ ? "soft" : "hard"; }
    std::string modulation_label() const override { return "bpsk"; }
    std::size_t bits_per_frame() const override { return 4; }
    double energy_per_frame() const override { return 7.0; }

    FrameOutcome simulate_frame(const LinkContext&, double n0, RngStream& rng) const override {
        std::array<std::uint8_t, 4> d{};
        for (auto& b : d) {
            b = static_cast<std::uint8_t>(rng.uniform_int(2));
        }
        const auto c = hamming74::encode(d);
        std::vector<std::complex<double>> y(7);
        for (std::size_t i = 0; i < 7; ++i) {
            y[i] = c[i] ? -1.0 : 1.0;
        }
        awgn_inplace(y, n0, rng);
        std::array<std::uint8_t, 4> d_hat{};
        if (soft_) {
            d_hat = hamming74::decode_soft(y);
        } else {
            std::array<std::uint8_t, 7> r{};
            for (std::size_t i = 0; i < 7; ++i) {
                r[i] = y[i].real() >= 0.0 ? 0 : 1;
            }
            d_hat = hamming74::decode_hard(r);
        }
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            errors += d[i] != d_hat[i];
        }
        return {errors, 7.0};
    }

private:
    bool soft_;
};

class Conv213Link final : public LinkModel {
public:
    Conv213Link(bool soft, std::size_t message_len) : soft_(soft), message_len_(message_len) {
        if (message_len_ == 0) {
            throw ConfigError("convolutional link needs a non-empty message");
        }
    }

    std::string scheme_label() const override { return "conv213"; }
    std::string detector_label() const override {
        return soft_ ? "viterbi_soft" : "viterbi_hard";
    }
    std::string modulation_label() const override { return "bpsk"; }
    std::size_t bits_per_frame() const override { return message_len_; }
    double energy_per_frame() const override {
        return 2.0 * static_cast<double>(message_len_ + conv213::kMemory);
    }

    FrameOutcome simulate_frame(const LinkContext&, double n0, RngStream& rng) const override {
        std::vector<std::uint8_t> msg(message_len_);
        for (auto& b : msg) {
            b = static_cast<std::uint8_t>(rng.uniform_int(2));
        }
        const auto coded = conv213::encode(msg);
        std::vector<std::complex<double>> y(coded.size());
        for (std::size_t i = 0; i < coded.size(); ++i) {
            y[i] = coded[i] ? -1.0 : 1.0;
        }
        awgn_inplace(y, n0, rng);
        std::vector<std::uint8_t> decoded;
        if (soft_) {
            decoded = conv213::viterbi_soft(y);
        } else {
            std::vector<std::uint8_t> hard(coded.size());
            for (std::size_t i = 0; i < coded.size(); ++i) {
                hard[i] = y[i].real() >= 0.0 ? 0 : 1;
            }
            decoded = conv213::viterbi_hard(hard);
        }
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < message_len_; ++i) {
            errors += msg[i] != decoded[i];
        }
        return {errors, energy_per_frame()};
    }

private:
    bool soft_;
    std::size_t message_len_;
};

class ConcatLink final : public LinkModel {
public:
    ConcatLink(GeneratorMatrix g, const ModulationScheme& m)
        : g_(std::move(g)), m_(m), codec_{&g_, &m_}, detector_(g_, m_) {}

    std::string scheme_label() const override { return "hamming74+dcc"; }
    std::string detector_label() const override { return "ml"; }
    std::string modulation_label() const override { return m_.label(); }
    std::string geometry_digest() const override { return generator_digest(g_); }
    std::size_t bits_per_frame() const override { return 4; }
    double energy_per_frame() const override {
        return static_cast<double>(codec_.datawords_per_codeword()) *
               static_cast<double>(g_.rows);
    }

    FrameOutcome simulate_frame(const LinkContext&, double n0, RngStream& rng) const override {
        std::array<std::uint8_t, 4> d{};
        for (auto& b : d) {
            b = static_cast<std::uint8_t>(rng.uniform_int(2));
        }
        auto frames = codec_.encode_codeword(d);
        double energy = 0.0;
        for (auto& v : frames) {
            energy += kernels::sum_abs2(v.data(), v.size());
            awgn_inplace(v, n0, rng);
        }
        const auto d_hat = codec_.decode_codeword(frames, detector_);
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            errors += d[i] != d_hat[i];
        }
        return {errors, energy};
    }

private:
    GeneratorMatrix g_;
    const ModulationScheme& m_;
    ConcatCodec codec_;
    MlDetector detector_;
};

} // namespace

std::unique_ptr<LinkContext> LinkModel::prepare(double) const {
    return std::make_unique<LinkContext>();
}

DetectorKind detector_by_name(const std::string& name) {
    if (name == "ml") return DetectorKind::ml;
    if (name == "mmse") return DetectorKind::mmse;
    if (name == "reducer") return DetectorKind::reducer;
    throw ConfigError("unknown detector: " + name);
}

const char* detector_label(DetectorKind kind) {
    switch (kind) {
    case DetectorKind::ml: return "ml";
    case DetectorKind::mmse: return "mmse";
    case DetectorKind::reducer: return "reducer";
    }
    return "unknown";
}

std::unique_ptr<LinkModel> make_uncoded_link(const ModulationScheme& m,
                                             std::size_t symbols_per_frame) {
    return std::make_unique<UncodedLink>(m, symbols_per_frame);
}

std::unique_ptr<LinkModel> make_block_dcc_link(GeneratorMatrix g, const ModulationScheme& m,
                                               DetectorKind detector) {
    return std::make_unique<BlockDccLink>(std::move(g), m, detector);
}

std::unique_ptr<LinkModel> make_trellis_dcc_link(TrellisSpec spec, TrellisParts parts,
                                                 const ModulationScheme& m,
                                                 std::size_t data_frames) {
    return std::make_unique<TrellisDccLink>(spec, std::move(parts), m, data_frames);
}

std::unique_ptr<LinkModel> make_hamming74_link(bool soft) {
    return std::make_unique<Hamming74Link>(soft);
}

std::unique_ptr<LinkModel> make_conv213_link(bool soft, std::size_t message_len) {
    return std::make_unique<Conv213Link>(soft, message_len);
}

std::unique_ptr<LinkModel> make_concat_link(GeneratorMatrix g, const ModulationScheme& m) {
    return std::make_unique<ConcatLink>(std::move(g), m);
}

namespace {

struct BatchTally {
    std::uint64_t frames = 0;
    std::uint64_t errors = 0;
    double energy = 0.0;
};

BatchTally run_batch(const LinkModel& link, const LinkContext& ctx, double n0,
                     std::uint64_t master_seed, double eb_n0_db, std::uint64_t batch_index,
                     std::uint64_t frames) {
    RngStream rng = rng_substream(master_seed, std::bit_cast<std::uint64_t>(eb_n0_db),
                                  batch_index);
    BatchTally tally;
    for (std::uint64_t i = 0; i < frames; ++i) {
        const FrameOutcome outcome = link.simulate_frame(ctx, n0, rng);
        tally.errors += outcome.bit_errors;
        tally.energy += outcome.energy;
    }
    tally.frames = frames;
    return tally;
}

} // namespace

BerCurve run_ber(const LinkModel& link, std::span<const double> eb_n0_db_points,
                 const StoppingRule& stopping, std::uint64_t master_seed, int workers) {
    if (eb_n0_db_points.empty()) {
        throw ConfigError("BER sweep must contain at least one SNR point");
    }
    if (workers < 1) {
        throw ConfigError("worker count must be at least 1");
    }
    const std::size_t bits_per_frame = link.bits_per_frame();
    const double eb = link.energy_per_frame() / static_cast<double>(bits_per_frame);

    // Batch size adapts to the frame's bit count (deterministically), so a
    // stopping check happens roughly every 64k bits regardless of the link.
    constexpr std::uint64_t kBatchesPerChunk = 8;
    const std::uint64_t frames_per_batch =
        std::clamp<std::uint64_t>(8192 / bits_per_frame, 1, 8192);
    const std::uint64_t max_frames =
        std::max<std::uint64_t>(1, stopping.max_bits / bits_per_frame);

    BerCurve curve;
    curve.scheme = link.scheme_label();
    curve.detector = link.detector_label();
    curve.modulation = link.modulation_label();
    curve.geometry_digest = link.geometry_digest();
    curve.seed = master_seed;
    curve.bits_per_frame = bits_per_frame;

    for (const double point_db : eb_n0_db_points) {
        const double n0 = eb * std::pow(10.0, -point_db / 10.0);
        const auto ctx = link.prepare(n0);

        std::uint64_t frames = 0;
        std::uint64_t errors = 0;
        double energy = 0.0;
        std::uint64_t next_batch = 0;
        while (true) {
            std::vector<BatchTally> tallies(kBatchesPerChunk);
            if (workers == 1) {
                for (std::uint64_t i = 0; i < kBatchesPerChunk; ++i) {
                    tallies[i] = run_batch(link, *ctx, n0, master_seed, point_db,
                                           next_batch + i, frames_per_batch);
                }
            } else {
                std::vector<std::thread> pool;
                const int active = static_cast<int>(
                    std::min<std::uint64_t>(static_cast<std::uint64_t>(workers),
                                            kBatchesPerChunk));
                for (int w = 0; w < active; ++w) {
                    pool.emplace_back([&, w] {
                        for (std::uint64_t i = static_cast<std::uint64_t>(w);
                             i < kBatchesPerChunk; i += static_cast<std::uint64_t>(active)) {
                            tallies[i] = run_batch(link, *ctx, n0, master_seed, point_db,
                                                   next_batch + i, frames_per_batch);
                        }
                    });
                }
                for (auto& t : pool) {
                    t.join();
                }
            }
            for (const BatchTally& t : tallies) {
                frames += t.frames;
                errors += t.errors;
                energy += t.energy;
            }
            next_batch += kBatchesPerChunk;
            if (errors >= stopping.target_errors || frames >= max_frames) {
                break;
            }
        }

        BerPoint p;
        p.eb_n0_db = point_db;
        p.frames = frames;
        p.bit_errors = errors;
        const double n_bits = static_cast<double>(frames) * static_cast<double>(bits_per_frame);
        p.ber = static_cast<double>(errors) / n_bits;
        p.ci95 = 1.96 * std::sqrt(p.ber * (1.0 - p.ber) / n_bits);
        p.mean_frame_energy = energy / static_cast<double>(frames);
        curve.points.push_back(p);
    }
    return curve;
}

} // namespace dcc
