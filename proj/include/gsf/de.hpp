#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/rng.hpp"

namespace gsf {

struct DeParams {
    double F = 0.5;
    double CR = 0.6;
    std::size_t objective_index = 0;

    /// Throws ConfigError unless F in [0,2] and CR in [0,1].
    void validate() const;
};

/// v = r1 + F * (r2 - r3), no bound handling.
DecisionVector mutate(std::span<const double> r1, std::span<const double> r2,
                      std::span<const double> r3, double F);

/// Binomial crossover. Component j comes from v when rand() <= CR or j is the
/// forced index drawn once per call; otherwise from x.
DecisionVector crossover(std::span<const double> x, std::span<const double> v, double CR,
                         RngStream& rng);

/// Single-objective survivor choice between a target and its trial.
/// Feasible beats infeasible, two infeasible compare by total bound violation,
/// two feasible compare on f[objective_index]. Ties keep the parent.
const Solution& de_select(const Solution& parent, const Solution& trial,
                          std::size_t objective_index);

/// The three donors of one mutation. Pointers stay valid for the duration of
/// one generation step.
struct ParentTriple {
    const Solution* r1 = nullptr;
    const Solution* r2 = nullptr;
    const Solution* r3 = nullptr;
};

/// Supplies donors for the member at `target` of the acting subpopulation.
using ParentSampler = std::function<ParentTriple(std::size_t target, RngStream& rng)>;

/// Samples three distinct members of `pop`, all different from the target.
/// The span must outlive the sampler and hold at least four members.
ParentSampler local_parent_sampler(std::span<const Solution> pop);

/// Reported once per trial vector, after selection. `kept` is true when the
/// trial survived into the next population (or entered the archive, for MONA).
struct TrialEvent {
    std::size_t target;
    const Solution& parent;
    const Solution& trial;
    bool kept;
};

using TrialObserver = std::function<void(const TrialEvent&)>;

/// Builds one trial vector for `target`: donors from the sampler, mutation, crossover.
DecisionVector make_trial(const Solution& target, const ParentSampler& sampler,
                          std::size_t target_index, double F, double CR, RngStream& rng);

/// One synchronous DE generation over `subpop`. Donors are drawn from the
/// population as it was at the start of the step. Returns the number of
/// evaluations performed (== subpop.size()).
std::size_t de_generation_step(std::vector<Solution>& subpop, const DeParams& params,
                               const ParentSampler& sampler, const ProblemSpec& problem,
                               RngStream& rng, const TrialObserver& observer = {});

struct DeRunResult {
    std::vector<Solution> population;
    std::size_t evaluations = 0;
};

/// Panmictic single-objective DE with a fixed generation budget.
DeRunResult run_de(const ProblemSpec& problem, std::size_t pop_size, const DeParams& params,
                   std::size_t generations, RngStream rng);

/// Lowest f[objective_index] among feasible members; +inf if none.
double best_objective(std::span<const Solution> pop, std::size_t objective_index);

}  // namespace gsf
