#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/de.hpp"
#include "gsf/rng.hpp"

namespace gsf {

enum class Gde3Choice { keep_s, keep_t, keep_both };

/// GDE3 survivor rule between a member s and its trial t.
Gde3Choice gde3_select(const Solution& s, const Solution& t);

enum class Normalization { min_max, none };

/// Distance of every member to its k-th nearest neighbour in objective space.
/// Larger means less crowded. With fewer than k+1 members the farthest
/// available neighbour is used.
std::vector<double> knn_crowding(std::span<const ObjectiveVector> set, std::size_t k,
                                 Normalization norm = Normalization::min_max);

struct PruneParams {
    std::size_t k = 2;
    std::size_t target_size = 1;
};

/// Reduces `population` to exactly target_size members: whole non-domination
/// fronts are kept while they fit, then the most crowded member of the cut
/// front is removed one at a time with neighbour distances refreshed after
/// every removal. On equal scores the newer (later) member goes first.
/// Survivors keep their relative order.
std::vector<Solution> prune(std::vector<Solution> population, const PruneParams& params);

/// One GDE3 generation; the population may grow through keep_both and is then
/// pruned back to its original size. Returns the number of evaluations.
std::size_t gde3_generation_step(std::vector<Solution>& subpop, const DeParams& de,
                                 std::size_t knn_k, const ParentSampler& sampler,
                                 const ProblemSpec& problem, RngStream& rng,
                                 const TrialObserver& observer = {});

struct Gde3RunResult {
    std::vector<Solution> population;
    std::size_t evaluations = 0;
};

/// Panmictic GDE3. knn_k == 0 selects the default of one neighbour per objective.
Gde3RunResult run_gde3(const ProblemSpec& problem, std::size_t pop_size, const DeParams& de,
                       std::size_t knn_k, std::size_t generations, RngStream rng,
                       const TrialObserver& observer = {});

}  // namespace gsf
