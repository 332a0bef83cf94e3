// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dcc/codec_block.hpp"
#include "dcc/diffraction.hpp"
#include "dcc/geometry.hpp"
#include "dcc/modem.hpp"

namespace dcc {

// Which geometry coordinates the search may move, and their bounds. Atom
// moves are in-plane offsets from the base positions, each component
// bounded by |offset| <= aperture_halfwidth_m.
struct SearchSpace {
    RisStack base;
    bool move_layer1_atoms = false;
    bool move_layer2_atoms = false;
    double aperture_halfwidth_m = 0.0;
    bool move_separation = false;
    double separation_min_m = 0.0;
    double separation_max_m = 0.0;

    std::size_t dimension() const;
};

struct OptimizerResult {
    RisStack best_stack;
    double best_d_min = 0.0;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    // (evaluation index, best d_min so far), appended on improvement.
    std::vector<std::pair<std::size_t, double>> trace;
};

enum class OptimizeMethod {
    multistart_direct_search,
    grid,
};

// d_min of the unit-Frobenius-normalized code; 0 when codewords coincide.
double objective(const GeneratorMatrix& g, const ModulationScheme& m);
double objective(const RisStack& stack, const ModulationScheme& m);

// Max-min code-distance search. Every evaluated geometry is feasible
// (bounds are clamped; moves that land in infeasible territory shrink back
// toward the last feasible point). Deterministic for a given seed. Throws
// InfeasibleSpace when the bounds admit no valid geometry.
OptimizerResult optimize(const SearchSpace& space, const ModulationScheme& m,
                         std::size_t budget, std::uint64_t seed,
                         OptimizeMethod method = OptimizeMethod::multistart_direct_search);

// Trace CSV "iteration,d_min".
void write_trace_csv(const OptimizerResult& result, std::ostream& out);

} // namespace dcc
