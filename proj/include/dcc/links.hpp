// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "dcc/baseline.hpp"
#include "dcc/channel.hpp"
#include "dcc/codec_trellis.hpp"
#include "dcc/detect.hpp"

namespace dcc {

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    double energy = 0.0; // radiated energy of this frame
};

// Per-SNR-point precomputation (e.g. the MMSE filter).
struct LinkContext {
    virtual ~LinkContext() = default;
};

// One end-to-end transmission scheme: draws a random frame, runs it through
// the AWGN channel at the given noise level, decodes, and counts bit errors.
// Implementations are pure given (context, n0, rng), so frame batches can be
// simulated concurrently.
class LinkModel {
public:
    virtual ~LinkModel() = default;

    virtual std::string scheme_label() const = 0;
    virtual std::string detector_label() const { return "-"; }
    virtual std::string modulation_label() const = 0;
    virtual std::string geometry_digest() const { return "-"; }

    virtual std::size_t bits_per_frame() const = 0;
    // Nominal mean radiated energy per frame, for the Eb/N0 conversion.
    virtual double energy_per_frame() const = 0;

    virtual std::unique_ptr<LinkContext> prepare(double n0) const;
    virtual FrameOutcome simulate_frame(const LinkContext& ctx, double n0,
                                        RngStream& rng) const = 0;
};

enum class DetectorKind {
    ml,
    mmse,
    reducer,
};

DetectorKind detector_by_name(const std::string& name);
const char* detector_label(DetectorKind kind);

// Plain modulated transmission, no code.
std::unique_ptr<LinkModel> make_uncoded_link(const ModulationScheme& m,
                                             std::size_t symbols_per_frame);

// Block DCC: dataword -> modulate -> G -> AWGN -> detector.
std::unique_ptr<LinkModel> make_block_dcc_link(GeneratorMatrix g, const ModulationScheme& m,
                                               DetectorKind detector);

// Trellis DCC burst of data_frames frames plus flush, sequence-decoded.
std::unique_ptr<LinkModel> make_trellis_dcc_link(TrellisSpec spec, TrellisParts parts,
                                                 const ModulationScheme& m,
                                                 std::size_t data_frames);

// Hamming(7,4) over BPSK, hard or soft decoding.
std::unique_ptr<LinkModel> make_hamming74_link(bool soft);

// Convolutional (2,1,3) over BPSK, message_len info bits per burst.
std::unique_ptr<LinkModel> make_conv213_link(bool soft, std::size_t message_len);

// Hamming(7,4) concatenated with block DCC (ML detection inside).
std::unique_ptr<LinkModel> make_concat_link(GeneratorMatrix g, const ModulationScheme& m);

struct StoppingRule {
    std::uint64_t target_errors = 100;
    std::uint64_t max_bits = 10'000'000;
};

// Monte-Carlo BER sweep. Deterministic for a given master seed at any worker
// count: frames run in fixed-size batches, each batch draws from its own
// derived substream, tallies merge by summation, and stopping is evaluated
// only at fixed chunk boundaries.
BerCurve run_ber(const LinkModel& link, std::span<const double> eb_n0_db_points,
                 const StoppingRule& stopping, std::uint64_t master_seed, int workers = 1);

} // namespace dcc
