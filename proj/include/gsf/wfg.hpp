#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/rng.hpp"

namespace gsf::wfg {

/// One WFG problem instance. Decision variable z_j (1-based j) lives in [0, 2j].
struct Instance {
    int problem = 1;          ///< 1..9
    std::size_t M = 2;        ///< objectives
    std::size_t k = 4;        ///< position parameters
    std::size_t l = 20;       ///< distance parameters

    [[nodiscard]] std::size_t n() const noexcept { return k + l; }

    /// Throws DimensionError when the combination is not a valid WFG instance.
    void validate() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Objective vector of z. Inputs outside the box are evaluated with the raw
/// formulas (results may be non-finite).
ObjectiveVector evaluate(const Instance& inst, std::span<const double> z);

/// Decision vector on the Pareto-optimal set for the given position values
/// (each in [0,1], one per position parameter).
DecisionVector optimal_solution(const Instance& inst, std::span<const double> position);

/// Random Pareto-optimal decision vector.
DecisionVector random_optimal_solution(const Instance& inst, RngStream& rng);

/// `count` optimal decision vectors evaluated and non-dominated filtered.
std::vector<ObjectiveVector> front_samples(const Instance& inst, std::size_t count,
                                           RngStream& rng);

/// ProblemSpec wrapper, id "WFG<p>".
ProblemSpec make_problem(const Instance& inst);

/// Parses "WFG4" / "wfg4" into a problem index; throws ConfigError otherwise.
int parse_problem_name(std::string_view name);

/// Low-level transformation and shape functions, exposed for testing.
namespace detail {
double s_linear(double y, double A);
double s_decept(double y, double A, double B, double C);
double s_multi(double y, double A, double B, double C);
double b_poly(double y, double alpha);
double b_flat(double y, double A, double B, double C);
double b_param(double y, double u, double A, double B, double C);
double r_sum(std::span<const double> y, std::span<const double> w);
double r_nonsep(std::span<const double> y, std::size_t A);
}  // namespace detail

}  // namespace gsf::wfg
