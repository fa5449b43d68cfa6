#include "gsf/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gsf/errors.hpp"

namespace gsf {

Solution::Solution(DecisionVector x, const ProblemSpec& problem) : x_(std::move(x)) {
    if (x_.size() != problem.dimension()) {
        throw DimensionError("decision vector has length " + std::to_string(x_.size()) +
                             ", problem '" + problem.id() + "' expects " +
                             std::to_string(problem.dimension()));
    }
    const auto& lo = problem.lower();
    const auto& hi = problem.upper();
    for (std::size_t j = 0; j < x_.size(); ++j) {
        if (x_[j] < lo[j]) {
            violation_ += lo[j] - x_[j];
        } else if (x_[j] > hi[j]) {
            violation_ += x_[j] - hi[j];
        } else if (std::isnan(x_[j])) {
            violation_ = std::numeric_limits<double>::infinity();
        }
    }
    feasible_ = violation_ == 0.0;
}

Solution::Solution(DecisionVector x, ObjectiveVector f, bool feasible, double violation)
    : x_(std::move(x)), f_(std::move(f)), feasible_(feasible), violation_(violation) {}

Solution Solution::from_objectives(ObjectiveVector f) {
    return Solution({}, std::move(f), true, 0.0);
}

const ObjectiveVector& Solution::f() const {
    if (!f_) {
        throw StateError("solution has not been evaluated");
    }
    return *f_;
}

void Solution::set_objectives(ObjectiveVector f) {
    if (f_) {
        throw StateError("objectives already set for this solution");
    }
    f_ = std::move(f);
}

ProblemSpec::ProblemSpec(std::string id, std::size_t num_objectives, std::vector<double> lower,
                         std::vector<double> upper, ObjectiveFunction fn)
    : id_(std::move(id)),
      num_objectives_(num_objectives),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      fn_(std::move(fn)) {
    if (num_objectives_ == 0) {
        throw DimensionError("problem needs at least one objective");
    }
    if (lower_.size() != upper_.size() || lower_.empty()) {
        throw DimensionError("bound vectors must be non-empty and of equal length");
    }
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] < upper_[j])) {
            throw ConfigError("lower bound must be below upper bound at index " +
                              std::to_string(j));
        }
    }
    if (!fn_) {
        throw ConfigError("problem '" + id_ + "' has no objective function");
    }
}

ObjectiveVector ProblemSpec::objectives(std::span<const double> x) const {
    if (x.size() != dimension()) {
        throw DimensionError("decision vector has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(dimension()));
    }
    auto f = fn_(x);
    if (f.size() != num_objectives_) {
        throw DimensionError("objective function of '" + id_ + "' returned " +
                             std::to_string(f.size()) + " values");
    }
    return f;
}

Solution ProblemSpec::evaluate(DecisionVector x) const {
    Solution s(std::move(x), *this);
    s.set_objectives(objectives(s.x()));
    return s;
}

Solution ProblemSpec::random_solution(RngStream& rng) const {
    DecisionVector x(dimension());
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = rng.uniform(lower_[j], upper_[j]);
    }
    return evaluate(std::move(x));
}

Dominance dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw DimensionError("dominance needs equal-length non-empty vectors (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                             ")");
    }
    bool a_le = true;
    bool b_le = true;
    bool a_lt = false;
    bool b_lt = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a_le = a_le && a[i] <= b[i];
        b_le = b_le && b[i] <= a[i];
        a_lt = a_lt || a[i] < b[i];
        b_lt = b_lt || b[i] < a[i];
    }
    if (a_le && a_lt) {
        return Dominance::a_dominates;
    }
    if (b_le && b_lt) {
        return Dominance::b_dominates;
    }
    return Dominance::incomparable_or_equal;
}

namespace {

// Bi-objective sweep: after a lexicographic sort, a point is dominated iff some
// lexicographically smaller, non-identical point has a second objective <= its own.
std::vector<std::size_t> nondominated_indices_2d(std::span<const ObjectiveVector> set) {
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set[a] < set[b];
    });
    std::vector<char> keep(set.size(), 0);
    double best_second = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && set[order[j]] == set[order[i]]) {
            ++j;
        }
        const double y = set[order[i]][1];
        const bool dominated = best_second <= y;
        for (std::size_t t = i; t < j; ++t) {
            keep[order[t]] = dominated ? 0 : 1;
        }
        best_second = std::min(best_second, y);
        i = j;
    }
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < set.size(); ++t) {
        if (keep[t]) {
            out.push_back(t);
        }
    }
    return out;
}

bool all_finite(std::span<const ObjectiveVector> set) {
    return std::all_of(set.begin(), set.end(), [](const ObjectiveVector& v) {
        return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
    });
}

}  // namespace

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> set) {
    if (set.empty()) {
        return {};
    }
    const std::size_t m = set.front().size();
    for (const auto& v : set) {
        if (v.size() != m) {
            throw DimensionError("objective vectors of unequal length in set");
        }
    }
    if (m == 2 && all_finite(set)) {
        return nondominated_indices_2d(set);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < set.size() && !dominated; ++j) {
            dominated = j != i && strictly_dominates(set[j], set[i]);
        }
        if (!dominated) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<ObjectiveVector> nondominated_filter(std::span<const ObjectiveVector> set) {
    std::vector<ObjectiveVector> out;
    for (auto i : nondominated_indices(set)) {
        out.push_back(set[i]);
    }
    return out;
}

std::vector<Solution> nondominated_filter(std::span<const Solution> set) {
    const auto objs = objectives_of(set);
    std::vector<Solution> out;
    for (auto i : nondominated_indices(objs)) {
        out.push_back(set[i]);
    }
    return out;
}

std::vector<std::size_t> nondomination_ranks(std::span<const ObjectiveVector> set) {
    const std::size_t n = set.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dominator_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            switch (dominates(set[i], set[j])) {
                case Dominance::a_dominates:
                    dominated_by_me[i].push_back(j);
                    ++dominator_count[j];
                    break;
                case Dominance::b_dominates:
                    dominated_by_me[j].push_back(i);
                    ++dominator_count[i];
                    break;
                case Dominance::incomparable_or_equal:
                    break;
            }
        }
    }
    std::vector<std::size_t> rank(n, 0);
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominator_count[i] == 0) {
            front.push_back(i);
        }
    }
    std::size_t level = 0;
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (auto i : front) {
            rank[i] = level;
            for (auto j : dominated_by_me[i]) {
                if (--dominator_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        front = std::move(next);
        ++level;
    }
    return rank;
}

std::vector<ObjectiveVector> objectives_of(std::span<const Solution> set) {
    std::vector<ObjectiveVector> out;
    out.reserve(set.size());
    for (const auto& s : set) {
        out.push_back(s.f());
    }
    return out;
}

}  // namespace gsf
