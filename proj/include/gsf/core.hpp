#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsf/rng.hpp"

namespace gsf {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;

class ProblemSpec;

/// A decision vector with its (optional) cached objective vector.
///
/// Feasibility is fixed at construction from the box bounds; objectives may be
/// attached once and are immutable afterwards.
class Solution {
public:
    Solution() = default;

    /// Unevaluated solution checked against the problem's bounds.
    Solution(DecisionVector x, const ProblemSpec& problem);

    /// Fully specified solution, e.g. when reading a result file.
    Solution(DecisionVector x, ObjectiveVector f, bool feasible, double violation = 0.0);

    /// Objective-only point for indicator work (empty decision vector, feasible).
    static Solution from_objectives(ObjectiveVector f);

    [[nodiscard]] const DecisionVector& x() const noexcept { return x_; }
    [[nodiscard]] bool evaluated() const noexcept { return f_.has_value(); }

    /// Throws StateError when not evaluated.
    [[nodiscard]] const ObjectiveVector& f() const;

    [[nodiscard]] bool feasible() const noexcept { return feasible_; }

    /// Sum of distances to the box over all coordinates; zero iff feasible.
    [[nodiscard]] double bound_violation() const noexcept { return violation_; }

    void set_objectives(ObjectiveVector f);

    std::optional<std::size_t> origin_subpop;

private:
    DecisionVector x_;
    std::optional<ObjectiveVector> f_;
    bool feasible_ = true;
    double violation_ = 0.0;
};

using ObjectiveFunction = std::function<ObjectiveVector(std::span<const double>)>;

/// Box-bounded, deterministic multi-objective minimization problem.
class ProblemSpec {
public:
    ProblemSpec(std::string id, std::size_t num_objectives, std::vector<double> lower,
                std::vector<double> upper, ObjectiveFunction fn);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] std::size_t num_objectives() const noexcept { return num_objectives_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return lower_.size(); }
    [[nodiscard]] const std::vector<double>& lower() const noexcept { return lower_; }
    [[nodiscard]] const std::vector<double>& upper() const noexcept { return upper_; }

    /// Raw objective values; out-of-bounds inputs are still evaluated.
    [[nodiscard]] ObjectiveVector objectives(std::span<const double> x) const;

    /// Builds and evaluates a solution, flagging it infeasible when out of bounds.
    [[nodiscard]] Solution evaluate(DecisionVector x) const;

    [[nodiscard]] Solution random_solution(RngStream& rng) const;

    /// Upper extent of each objective over the feasible box, when known.
    /// Used for scale-dependent defaults such as the initial novelty threshold.
    std::optional<ObjectiveVector> objective_extent;

private:
    std::string id_;
    std::size_t num_objectives_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    ObjectiveFunction fn_;
};

enum class Dominance { a_dominates, b_dominates, incomparable_or_equal };

/// Pareto dominance for minimization. Throws DimensionError on length mismatch.
Dominance dominates(std::span<const double> a, std::span<const double> b);

inline bool strictly_dominates(std::span<const double> a, std::span<const double> b) {
    return dominates(a, b) == Dominance::a_dominates;
}

/// Members not dominated by any other member; input order and duplicates kept.
std::vector<Solution> nondominated_filter(std::span<const Solution> set);
std::vector<ObjectiveVector> nondominated_filter(std::span<const ObjectiveVector> set);

/// Indices of the non-dominated members, in input order.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> set);

/// Non-domination rank of every member (0 = first front).
std::vector<std::size_t> nondomination_ranks(std::span<const ObjectiveVector> set);

std::vector<ObjectiveVector> objectives_of(std::span<const Solution> set);

}  // namespace gsf
