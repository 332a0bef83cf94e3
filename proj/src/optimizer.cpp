// SPDX-License-Identifier: Apache-2.0

#include "dcc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dcc/channel.hpp"
#include "dcc/errors.hpp"

namespace dcc {
namespace {

struct Bounds {
    double lo;
    double hi;
};

// Flat parameter vector: [separation?] then (dx, dy) per movable atom,
// layer 1 first.
struct Parameterization {
    const SearchSpace* space;
    std::vector<Bounds> bounds;

    explicit Parameterization(const SearchSpace& s) : space(&s) {
        if (s.move_separation) {
            if (!(s.separation_max_m >= s.separation_min_m) || !(s.separation_min_m > 0.0)) {
                throw InfeasibleSpace("separation range is empty or non-positive");
            }
            bounds.push_back({s.separation_min_m, s.separation_max_m});
        }
        const double a = s.aperture_halfwidth_m;
        auto add_atoms = [&](const MetaAtomLayer& layer) {
            for (std::size_t i = 0; i < layer.count(); ++i) {
                bounds.push_back({-a, a});
                bounds.push_back({-a, a});
            }
        };
        if (s.move_layer1_atoms) {
            if (!(a > 0.0)) {
                throw InfeasibleSpace("atom moves need a positive aperture halfwidth");
            }
            add_atoms(s.base.layer1);
        }
        if (s.move_layer2_atoms) {
            if (!(a > 0.0)) {
                throw InfeasibleSpace("atom moves need a positive aperture halfwidth");
            }
            add_atoms(s.base.layer2);
        }
    }

    std::vector<double> clamp(std::vector<double> p) const {
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = std::clamp(p[i], bounds[i].lo, bounds[i].hi);
        }
        return p;
    }

    std::vector<double> initial() const {
        std::vector<double> p;
        std::size_t idx = 0;
        if (space->move_separation) {
            p.push_back(std::clamp(space->base.separation_m, bounds[0].lo, bounds[0].hi));
            idx = 1;
        }
        p.resize(bounds.size(), 0.0);
        (void)idx;
        return p;
    }

    RisStack realize(const std::vector<double>& p) const {
        RisStack stack = space->base;
        std::size_t idx = 0;
        if (space->move_separation) {
            const double sep = p[idx++];
            stack.separation_m = sep;
            stack.layer2.plane_z = stack.layer1.plane_z + sep;
            for (Vec3& pos : stack.layer2.positions) {
                pos.z = stack.layer2.plane_z;
            }
        }
        auto apply = [&](MetaAtomLayer& layer, const MetaAtomLayer& base) {
            for (std::size_t i = 0; i < layer.count(); ++i) {
                layer.positions[i].x = base.positions[i].x + p[idx++];
                layer.positions[i].y = base.positions[i].y + p[idx++];
            }
        };
        if (space->move_layer1_atoms) {
            apply(stack.layer1, space->base.layer1);
        }
        if (space->move_layer2_atoms) {
            apply(stack.layer2, space->base.layer2);
        }
        return stack;
    }

    bool feasible(const std::vector<double>& p, RisStack* out = nullptr) const {
        RisStack stack = realize(p);
        if (!validate_stack(stack).empty()) {
            return false;
        }
        if (out != nullptr) {
            *out = std::move(stack);
        }
        return true;
    }
};

// Evaluation bookkeeping shared by both methods.
struct Tracker {
    const Parameterization* par;
    const ModulationScheme* m;
    std::size_t budget;
    std::size_t evaluations = 0;
    bool any_feasible = false;
    double best = -1.0;
    RisStack best_stack;
    std::vector<double> best_params;
    std::vector<std::pair<std::size_t, double>> trace;

    bool exhausted() const { return evaluations >= budget; }

    // Evaluates a feasible geometry; returns its objective.
    double evaluate(const std::vector<double>& p, const RisStack& stack) {
        ++evaluations;
        any_feasible = true;
        const double value = objective(stack, *m);
        if (value > best) {
            best = value;
            best_stack = stack;
            best_params = p;
            trace.emplace_back(evaluations, value);
        }
        return value;
    }
};

// Shrinks the step from `from` toward `to` until the point is feasible;
// returns false when even tiny steps stay infeasible.
bool repair_toward(const Parameterization& par, const std::vector<double>& from,
                   std::vector<double>& to, RisStack* stack) {
    if (par.feasible(to, stack)) {
        return true;
    }
    std::vector<double> candidate(to.size());
    for (int iter = 0; iter < 20; ++iter) {
        for (std::size_t i = 0; i < to.size(); ++i) {
            candidate[i] = 0.5 * (from[i] + to[i]);
        }
        if (par.feasible(candidate, stack)) {
            to = candidate;
            return true;
        }
        to = candidate;
    }
    return false;
}

void direct_search(Tracker& tracker, const Parameterization& par, std::vector<double> start) {
    RisStack stack;
    if (!par.feasible(start, &stack)) {
        // Pull the start toward the (feasible-projected) initial point.
        std::vector<double> anchor = par.clamp(par.initial());
        if (!repair_toward(par, anchor, start, &stack)) {
            return;
        }
    }
    if (tracker.exhausted()) {
        return;
    }
    double current = tracker.evaluate(start, stack);

    std::vector<double> step(par.bounds.size());
    for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] = 0.25 * (par.bounds[i].hi - par.bounds[i].lo);
    }
    const double min_scale = 1e-7;

    while (!tracker.exhausted()) {
        double best_value = current;
        std::vector<double> best_point;
        for (std::size_t axis = 0; axis < step.size() && !tracker.exhausted(); ++axis) {
            for (const double dir : {+1.0, -1.0}) {
                if (tracker.exhausted()) {
                    break;
                }
                std::vector<double> cand = start;
                cand[axis] += dir * step[axis];
                cand = par.clamp(cand);
                if (cand == start) {
                    continue;
                }
                RisStack cand_stack;
                if (!repair_toward(par, start, cand, &cand_stack) || cand == start) {
                    continue;
                }
                const double value = tracker.evaluate(cand, cand_stack);
                if (value > best_value) {
                    best_value = value;
                    best_point = cand;
                }
            }
        }
        if (best_value > current && !best_point.empty()) {
            current = best_value;
            start = best_point;
            continue;
        }
        bool all_tiny = true;
        for (std::size_t i = 0; i < step.size(); ++i) {
            step[i] *= 0.5;
            if (step[i] > min_scale * (par.bounds[i].hi - par.bounds[i].lo)) {
                all_tiny = false;
            }
        }
        if (all_tiny) {
            break;
        }
    }
}

} // namespace

std::size_t SearchSpace::dimension() const {
    std::size_t d = move_separation ? 1 : 0;
    if (move_layer1_atoms) {
        d += 2 * base.layer1.count();
    }
    if (move_layer2_atoms) {
        d += 2 * base.layer2.count();
    }
    return d;
}

double objective(const GeneratorMatrix& g, const ModulationScheme& m) {
    const auto codebook = enumerate_codebook(g, m);
    return distance_spectrum(codebook).d_min;
}

double objective(const RisStack& stack, const ModulationScheme& m) {
    return objective(build_generator(stack, Normalization::unit_frobenius), m);
}

OptimizerResult optimize(const SearchSpace& space, const ModulationScheme& m,
                         std::size_t budget, std::uint64_t seed, OptimizeMethod method) {
    if (budget < 1) {
        throw InvalidArgument("optimizer budget must be at least 1");
    }
    Parameterization par(space);
    if (par.bounds.empty()) {
        throw InfeasibleSpace("search space has no movable coordinates");
    }

    Tracker tracker;
    tracker.par = &par;
    tracker.m = &m;
    tracker.budget = budget;

    if (method == OptimizeMethod::grid) {
        const std::size_t dim = par.bounds.size();
        std::size_t per_axis = static_cast<std::size_t>(
            std::floor(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(dim))));
        per_axis = std::max<std::size_t>(per_axis, 1);
        std::vector<std::size_t> idx(dim, 0);
        while (!tracker.exhausted()) {
            std::vector<double> p(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                const double t = per_axis == 1
                                     ? 0.5
                                     : static_cast<double>(idx[i]) /
                                           static_cast<double>(per_axis - 1);
                p[i] = par.bounds[i].lo + t * (par.bounds[i].hi - par.bounds[i].lo);
            }
            RisStack stack;
            if (par.feasible(p, &stack)) {
                tracker.evaluate(p, stack);
            }
            std::size_t axis = 0;
            while (axis < dim && ++idx[axis] == per_axis) {
                idx[axis] = 0;
                ++axis;
            }
            if (axis == dim) {
                break;
            }
        }
    } else {
        constexpr std::size_t kRestarts = 8;
        RngStream rng = rng_substream(seed, 0x6f7074u, 0);
        const std::size_t restarts = std::min<std::size_t>(kRestarts, budget);
        for (std::size_t r = 0; r < restarts && !tracker.exhausted(); ++r) {
            std::vector<double> start;
            if (r == 0) {
                start = par.clamp(par.initial());
            } else {
                // Stratified starts along every axis, jittered within the
                // stratum for multi-restart coverage.
                start.resize(par.bounds.size());
                for (std::size_t i = 0; i < start.size(); ++i) {
                    const double width = par.bounds[i].hi - par.bounds[i].lo;
                    const double stratum =
                        (static_cast<double>(r - 1) + rng.uniform()) /
                        static_cast<double>(restarts - 1);
                    start[i] = par.bounds[i].lo + stratum * width;
                }
            }
            const std::size_t share = budget / restarts + (r == 0 ? budget % restarts : 0);
            const std::size_t limit = std::min(budget, tracker.evaluations + share);
            Tracker sub = tracker;
            sub.budget = limit;
            direct_search(sub, par, std::move(start));
            tracker = std::move(sub);
            tracker.budget = budget;
        }
        // Budget left over from early-converging restarts polishes the
        // incumbent.
        if (!tracker.exhausted() && tracker.any_feasible) {
            direct_search(tracker, par, tracker.best_params);
        }
    }

    if (!tracker.any_feasible) {
        throw InfeasibleSpace("no feasible geometry inside the search bounds");
    }
    OptimizerResult result;
    result.best_stack = tracker.best_stack;
    result.best_d_min = tracker.best;
    result.evaluations = tracker.evaluations;
    result.seed = seed;
    result.trace = std::move(tracker.trace);
    return result;
}

void write_trace_csv(const OptimizerResult& result, std::ostream& out) {
    out << "iteration,d_min\n";
    char buf[64];
    for (const auto& [iter, value] : result.trace) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", iter, value);
        out << buf;
    }
}

} // namespace dcc
