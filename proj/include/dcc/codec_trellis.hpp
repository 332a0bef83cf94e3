// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dcc/codec_block.hpp"
#include "dcc/diffraction.hpp"
#include "dcc/modem.hpp"

namespace dcc {

// How the previous dataframe enters the encoder.
//   after_memory  - memory surface at the output aperture: the previous
//                   frame's bits set unit-modulus phases on the n outputs.
//   ahead_memory  - memory surface ahead of the data surface, driven by the
//                   binary sum (XOR) of current and previous frames.
//   extra_atoms   - the data aperture physically carries k*(mu+1) atoms and
//                   is driven by the current plus the last mu frames.
enum class TrellisVariant {
    after_memory,
    ahead_memory,
    extra_atoms,
};

struct TrellisSpec {
    TrellisVariant variant = TrellisVariant::extra_atoms;
    int k = 1;  // data symbols per frame
    int n = 2;  // output symbols per frame
    int mu = 1; // memory depth in frames
    int b = 1;  // bits per symbol

    std::uint64_t frame_count() const { return std::uint64_t{1} << (k * b); }
    std::uint64_t state_count() const { return std::uint64_t{1} << (k * b * mu); }
};

// The diffraction matrices a variant needs.
struct TrellisParts {
    GeneratorMatrix g;              // n x k(mu+1) for extra_atoms, n x k otherwise
    GeneratorMatrix memory_to_data; // k x k, ahead_memory only
};

// Previous frames, most recent first; size mu (empty for mu = 0).
struct TrellisState {
    std::vector<Dataword> prev;
};

// Forward model of one frame.
Codeword trellis_output(const TrellisSpec& spec, const TrellisParts& parts,
                        const TrellisState& state, const Dataword& d_t,
                        const ModulationScheme& m);

// Assembles and jointly normalizes the diffraction matrices for a variant
// from stack geometry (single scale factor; the effective per-frame map has
// squared Frobenius norm n). For ahead_memory the k-atom memory surface sits
// memory_separation_m before layer 1, atoms aligned in-plane; 0 means reuse
// the stack separation.
TrellisParts build_trellis_generator(const RisStack& stack, const TrellisSpec& spec,
                                     double memory_separation_m = 0.0);

// ML sequence decoding over complex Euclidean branch metrics. The received
// sequence must end with mu all-zero flush frames; returns the
// y.size() - mu decoded data frames. Exact metric ties resolve toward the
// lexicographically smaller input sequence. Throws StateSpaceTooLarge above
// 2^16 states.
std::vector<Dataword> viterbi_dcc(const TrellisSpec& spec, const TrellisParts& parts,
                                  const ModulationScheme& m,
                                  std::span<const Codeword> y, double noise_var);

// Debug dump: one CSV row per (state, input) branch with its output values.
void write_trellis_csv(const TrellisSpec& spec, const TrellisParts& parts,
                       const ModulationScheme& m, std::ostream& out);

} // namespace dcc
