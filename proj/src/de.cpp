#include "gsf/de.hpp"

#include <limits>
#include <string>

#include "gsf/errors.hpp"

namespace gsf {

void DeParams::validate() const {
    if (!(F >= 0.0 && F <= 2.0)) {
        throw ConfigError("DE weight F must lie in [0, 2], got " + std::to_string(F));
    }
    if (!(CR >= 0.0 && CR <= 1.0)) {
        throw ConfigError("DE crossover rate CR must lie in [0, 1], got " + std::to_string(CR));
    }
}

DecisionVector mutate(std::span<const double> r1, std::span<const double> r2,
                      std::span<const double> r3, double F) {
    if (r1.size() != r2.size() || r1.size() != r3.size()) {
        throw DimensionError("mutation donors differ in length");
    }
    DecisionVector v(r1.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = r1[j] + F * (r2[j] - r3[j]);
    }
    return v;
}

DecisionVector crossover(std::span<const double> x, std::span<const double> v, double CR,
                         RngStream& rng) {
    if (x.size() != v.size() || x.empty()) {
        throw DimensionError("crossover needs equal-length non-empty vectors");
    }
    const std::size_t forced = rng.uniform_index(x.size());
    DecisionVector u(x.begin(), x.end());
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (rng.uniform() <= CR || j == forced) {
            u[j] = v[j];
        }
    }
    return u;
}

const Solution& de_select(const Solution& parent, const Solution& trial,
                          std::size_t objective_index) {
    if (!parent.evaluated() || !trial.evaluated()) {
        throw StateError("de_select needs evaluated solutions");
    }
    if (parent.feasible() != trial.feasible()) {
        return parent.feasible() ? parent : trial;
    }
    if (!parent.feasible()) {
        return trial.bound_violation() < parent.bound_violation() ? trial : parent;
    }
    const auto& fp = parent.f();
    const auto& ft = trial.f();
    if (objective_index >= fp.size() || objective_index >= ft.size()) {
        throw IndexError("objective index " + std::to_string(objective_index) +
                         " out of range");
    }
    return ft[objective_index] < fp[objective_index] ? trial : parent;
}

ParentSampler local_parent_sampler(std::span<const Solution> pop) {
    if (pop.size() < 4) {
        throw ConfigError("local DE sampling needs at least 4 members, got " +
                          std::to_string(pop.size()));
    }
    return [pop](std::size_t target, RngStream& rng) {
        std::size_t idx[3];
        for (int k = 0; k < 3; ++k) {
            std::size_t c;
            do {
                c = rng.uniform_index(pop.size());
            } while (c == target || (k > 0 && c == idx[0]) || (k > 1 && c == idx[1]));
            idx[k] = c;
        }
        return ParentTriple{&pop[idx[0]], &pop[idx[1]], &pop[idx[2]]};
    };
}

DecisionVector make_trial(const Solution& target, const ParentSampler& sampler,
                          std::size_t target_index, double F, double CR, RngStream& rng) {
    const auto donors = sampler(target_index, rng);
    const auto v = mutate(donors.r1->x(), donors.r2->x(), donors.r3->x(), F);
    return crossover(target.x(), v, CR, rng);
}

std::size_t de_generation_step(std::vector<Solution>& subpop, const DeParams& params,
                               const ParentSampler& sampler, const ProblemSpec& problem,
                               RngStream& rng, const TrialObserver& observer) {
    std::vector<Solution> next;
    next.reserve(subpop.size());
    for (std::size_t i = 0; i < subpop.size(); ++i) {
        const Solution& parent = subpop[i];
        Solution trial =
            problem.evaluate(make_trial(parent, sampler, i, params.F, params.CR, rng));
        trial.origin_subpop = parent.origin_subpop;
        const Solution& winner = de_select(parent, trial, params.objective_index);
        const bool kept = &winner == &trial;
        if (observer) {
            observer(TrialEvent{i, parent, trial, kept});
        }
        next.push_back(kept ? std::move(trial) : parent);
    }
    subpop = std::move(next);
    return subpop.size();
}

DeRunResult run_de(const ProblemSpec& problem, std::size_t pop_size, const DeParams& params,
                   std::size_t generations, RngStream rng) {
    params.validate();
    if (params.objective_index >= problem.num_objectives()) {
        throw ConfigError("objective index out of range for problem '" + problem.id() + "'");
    }
    DeRunResult result;
    auto init = rng.split(static_cast<std::uint64_t>(RngPurpose::initialization));
    auto vary = rng.split(static_cast<std::uint64_t>(RngPurpose::variation));
    result.population.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        result.population.push_back(problem.random_solution(init));
    }
    result.evaluations = pop_size;
    for (std::size_t g = 0; g < generations; ++g) {
        const auto sampler = local_parent_sampler(result.population);
        result.evaluations +=
            de_generation_step(result.population, params, sampler, problem, vary);
    }
    return result;
}

double best_objective(std::span<const Solution> pop, std::size_t objective_index) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : pop) {
        if (s.feasible() && s.evaluated() && s.f()[objective_index] < best) {
            best = s.f()[objective_index];
        }
    }
    return best;
}

}  // namespace gsf
