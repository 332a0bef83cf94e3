// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcc/errors.hpp"
#include "dcc/optimizer.hpp"

using namespace dcc;

namespace {

const CarrierSpec kCarrier = CarrierSpec::from_frequency(25e9);
const double kLambda = kCarrier.wavelength_m;

const ModulationScheme& bpsk() { return ModulationScheme::get(SchemeName::bpsk); }

SearchSpace separation_sweep(const RisStack& base, double lo, double hi) {
    SearchSpace space;
    space.base = base;
    space.move_separation = true;
    space.separation_min_m = lo;
    space.separation_max_m = hi;
    return space;
}

} // namespace

TEST_CASE("objective of the abstract identity stack is 2*sqrt(2)") {
    GeneratorMatrix g;
    g.rows = 4;
    g.cols = 2;
    g.entries = {{1, 0}, {0, 0}, {0, 0}, {1, 0}, {1, 0}, {0, 0}, {0, 0}, {1, 0}};
    CHECK(objective(g, bpsk()) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rescaling geometry and wavelength together leaves d_min unchanged") {
    const RisStack base = preset_repetition_42(kCarrier, kLambda / 2, kLambda / 3, 12 * kLambda);
    const double alpha = 2.0;
    const CarrierSpec scaled_carrier = CarrierSpec::from_frequency(kCarrier.frequency_hz / alpha);
    const RisStack scaled = preset_repetition_42(scaled_carrier, alpha * kLambda / 2,
                                                 alpha * kLambda / 3, alpha * 12 * kLambda);
    CHECK(objective(base, bpsk()) == doctest::Approx(objective(scaled, bpsk())).epsilon(1e-9));
}

TEST_CASE("coincident codewords give a zero objective") {
    GeneratorMatrix g;
    g.rows = 2;
    g.cols = 2;
    g.entries = {{1, 0}, {1, 0}, {1, 0}, {1, 0}};
    CHECK(objective(g, bpsk()) == 0.0);
}

TEST_CASE("budget 1 returns the feasible-projected initial point") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const SearchSpace space = separation_sweep(base, 12 * kLambda, 30 * kLambda);
    const OptimizerResult result = optimize(space, bpsk(), 1, 3);
    CHECK(result.evaluations == 1);
    // The base separation (10 lambda) projects onto the lower bound.
    CHECK(result.best_stack.separation_m == doctest::Approx(12 * kLambda).epsilon(1e-12));
    CHECK(validate_stack(result.best_stack).empty());
}

TEST_CASE("traces are reproducible and monotone") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const SearchSpace space = separation_sweep(base, 10 * kLambda, 30 * kLambda);
    const OptimizerResult a = optimize(space, bpsk(), 120, 42);
    const OptimizerResult b = optimize(space, bpsk(), 120, 42);
    CHECK(a.trace == b.trace);
    CHECK(a.best_d_min == b.best_d_min);
    for (std::size_t i = 0; i + 1 < a.trace.size(); ++i) {
        CHECK(a.trace[i + 1].second >= a.trace[i].second);
        CHECK(a.trace[i + 1].first > a.trace[i].first);
    }
}

TEST_CASE("multistart search dominates the 201-point grid oracle in 1-D") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const SearchSpace space = separation_sweep(base, 10 * kLambda, 30 * kLambda);

    // Grid oracle: 201 evenly spaced separations.
    double grid_best = -1.0;
    for (int i = 0; i < 201; ++i) {
        RisStack stack = base;
        const double sep =
            10 * kLambda + (30 * kLambda - 10 * kLambda) * i / 200.0;
        stack.separation_m = sep;
        stack.layer2.plane_z = stack.layer1.plane_z + sep;
        for (auto& p : stack.layer2.positions) {
            p.z = stack.layer2.plane_z;
        }
        grid_best = std::max(grid_best, objective(stack, bpsk()));
    }

    const OptimizerResult result = optimize(space, bpsk(), 201, 7);
    CHECK(result.best_d_min >= grid_best - 1e-6);
}

TEST_CASE("multistart dominates an equal-budget grid in higher dimensions") {
    // 5 free coordinates: separation plus (x, y) for both layer-1 atoms.
    const RisStack base = preset_systematic_42(kCarrier, 0.4 * kLambda, 10 * kLambda);
    SearchSpace space = separation_sweep(base, 10 * kLambda, 20 * kLambda);
    space.move_layer1_atoms = true;
    space.aperture_halfwidth_m = kLambda / 4;
    const OptimizerResult grid = optimize(space, bpsk(), 600, 0, OptimizeMethod::grid);
    const OptimizerResult search = optimize(space, bpsk(), 600, 13);
    CHECK(search.best_d_min >= grid.best_d_min - 1e-6);
}

TEST_CASE("grid method matches a manual sweep") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const SearchSpace space = separation_sweep(base, 10 * kLambda, 20 * kLambda);
    const OptimizerResult result = optimize(space, bpsk(), 51, 0, OptimizeMethod::grid);
    double manual_best = -1.0;
    for (int i = 0; i < 51; ++i) {
        RisStack stack = base;
        const double sep = 10 * kLambda + (20 * kLambda - 10 * kLambda) * i / 50.0;
        stack.separation_m = sep;
        stack.layer2.plane_z = stack.layer1.plane_z + sep;
        for (auto& p : stack.layer2.positions) {
            p.z = stack.layer2.plane_z;
        }
        manual_best = std::max(manual_best, objective(stack, bpsk()));
    }
    CHECK(result.best_d_min == doctest::Approx(manual_best).epsilon(1e-12));
}

TEST_CASE("result d_min matches a from-scratch recomputation") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    SearchSpace space = separation_sweep(base, 10 * kLambda, 30 * kLambda);
    space.move_layer2_atoms = true;
    space.aperture_halfwidth_m = kLambda / 8;
    const OptimizerResult result = optimize(space, bpsk(), 150, 11);
    CHECK(result.best_d_min == doctest::Approx(objective(result.best_stack, bpsk())).epsilon(1e-9));
    CHECK(validate_stack(result.best_stack).empty());
}

TEST_CASE("infeasible bounds are reported") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    // Entire separation range below the 10-lambda validity bound.
    const SearchSpace space = separation_sweep(base, kLambda, 2 * kLambda);
    CHECK_THROWS_AS(optimize(space, bpsk(), 50, 1), InfeasibleSpace);
    SearchSpace empty;
    empty.base = base;
    CHECK_THROWS_AS(optimize(empty, bpsk(), 50, 1), InfeasibleSpace);
}

TEST_CASE("optimizer budgets below 1 are rejected") {
    const RisStack base = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    const SearchSpace space = separation_sweep(base, 10 * kLambda, 30 * kLambda);
    CHECK_THROWS_AS(optimize(space, bpsk(), 0, 1), InvalidArgument);
}
