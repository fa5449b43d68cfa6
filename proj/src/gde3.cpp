#include "gsf/gde3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gsf/errors.hpp"

namespace gsf {

Gde3Choice gde3_select(const Solution& s, const Solution& t) {
    if (!s.evaluated() || !t.evaluated()) {
        throw StateError("gde3_select needs evaluated solutions");
    }
    if (!s.feasible() && !t.feasible()) {
        // Raw objectives stand in for the unconstrained space.
        return strictly_dominates(t.f(), s.f()) ? Gde3Choice::keep_t : Gde3Choice::keep_s;
    }
    if (s.feasible() != t.feasible()) {
        return s.feasible() ? Gde3Choice::keep_s : Gde3Choice::keep_t;
    }
    switch (dominates(s.f(), t.f())) {
        case Dominance::a_dominates:
            return Gde3Choice::keep_s;
        case Dominance::b_dominates:
            return Gde3Choice::keep_t;
        case Dominance::incomparable_or_equal:
            break;
    }
    return Gde3Choice::keep_both;
}

namespace {

std::vector<ObjectiveVector> normalized(std::span<const ObjectiveVector> set, Normalization norm) {
    std::vector<ObjectiveVector> out(set.begin(), set.end());
    if (norm == Normalization::none || set.empty()) {
        return out;
    }
    const std::size_t m = set.front().size();
    for (std::size_t d = 0; d < m; ++d) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& v : set) {
            lo = std::min(lo, v[d]);
            hi = std::max(hi, v[d]);
        }
        const double range = hi - lo;
        for (auto& v : out) {
            v[d] = range > 0.0 ? (v[d] - lo) / range : 0.0;
        }
    }
    return out;
}

double euclidean(const ObjectiveVector& a, const ObjectiveVector& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

// Distances among the members of one cut front, with per-member k-NN sets
// maintained incrementally as members are removed.
class CrowdingTracker {
public:
    CrowdingTracker(std::span<const ObjectiveVector> pts, std::size_t k)
        : n_(pts.size()), k_(k), alive_(pts.size(), 1), score_(pts.size()), nn_(pts.size()) {
        const auto norm = normalized(pts, Normalization::min_max);
        dist_.assign(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                dist_[i * n_ + j] = dist_[j * n_ + i] = euclidean(norm[i], norm[j]);
            }
        }
        alive_count_ = n_;
        refresh_all();
    }

    // Index of the most crowded live member; ties go to the highest index.
    [[nodiscard]] std::size_t most_crowded() const {
        std::size_t pick = n_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alive_[i] && (pick == n_ || score_[i] <= score_[pick])) {
                pick = i;
            }
        }
        return pick;
    }

    void remove(std::size_t r) {
        alive_[r] = 0;
        --alive_count_;
        if (alive_count_ <= k_) {
            refresh_all();
            return;
        }
        for (std::size_t p = 0; p < n_; ++p) {
            if (alive_[p] && std::find(nn_[p].begin(), nn_[p].end(), r) != nn_[p].end()) {
                refresh(p);
            }
        }
    }

private:
    [[nodiscard]] std::size_t effective_k() const {
        return std::min(k_, alive_count_ > 0 ? alive_count_ - 1 : 0);
    }

    void refresh_all() {
        for (std::size_t p = 0; p < n_; ++p) {
            if (alive_[p]) {
                refresh(p);
            }
        }
    }

    void refresh(std::size_t p) {
        const std::size_t k = effective_k();
        if (k == 0) {
            nn_[p].clear();
            score_[p] = std::numeric_limits<double>::infinity();
            return;
        }
        scratch_.clear();
        for (std::size_t q = 0; q < n_; ++q) {
            if (q != p && alive_[q]) {
                scratch_.push_back(q);
            }
        }
        const double* row = &dist_[p * n_];
        std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         scratch_.end(), [row](std::size_t a, std::size_t b) {
                             return row[a] < row[b] || (row[a] == row[b] && a < b);
                         });
        nn_[p].assign(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k));
        score_[p] = row[scratch_[k - 1]];
    }

    std::size_t n_;
    std::size_t k_;
    std::size_t alive_count_ = 0;
    std::vector<double> dist_;
    std::vector<char> alive_;
    std::vector<double> score_;
    std::vector<std::vector<std::size_t>> nn_;
    std::vector<std::size_t> scratch_;
};

}  // namespace

std::vector<double> knn_crowding(std::span<const ObjectiveVector> set, std::size_t k,
                                 Normalization norm) {
    if (k == 0) {
        throw ConfigError("k-NN crowding needs k >= 1");
    }
    const std::size_t n = set.size();
    if (n < 2) {
        return std::vector<double>(n, std::numeric_limits<double>::infinity());
    }
    const auto pts = normalized(set, norm);
    const std::size_t keff = std::min(k, n - 1);
    std::vector<double> scores(n);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                row.push_back(euclidean(pts[i], pts[j]));
            }
        }
        std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keff - 1),
                         row.end());
        scores[i] = row[keff - 1];
    }
    return scores;
}

std::vector<Solution> prune(std::vector<Solution> population, const PruneParams& params) {
    if (params.k == 0 || params.target_size == 0) {
        throw ConfigError("prune needs k >= 1 and target_size >= 1");
    }
    if (population.size() <= params.target_size) {
        return population;
    }
    const auto objs = objectives_of(population);
    const auto rank = nondomination_ranks(objs);

    const std::size_t max_rank = *std::max_element(rank.begin(), rank.end());
    std::vector<std::size_t> per_rank(max_rank + 1, 0);
    for (auto r : rank) {
        ++per_rank[r];
    }
    std::size_t cut_rank = 0;
    std::size_t filled = 0;
    while (filled + per_rank[cut_rank] <= params.target_size) {
        filled += per_rank[cut_rank];
        ++cut_rank;
    }

    std::vector<char> keep(population.size(), 0);
    std::vector<std::size_t> cut;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (rank[i] < cut_rank) {
            keep[i] = 1;
        } else if (rank[i] == cut_rank) {
            cut.push_back(i);
        }
    }
    std::vector<ObjectiveVector> cut_objs;
    cut_objs.reserve(cut.size());
    for (auto i : cut) {
        cut_objs.push_back(objs[i]);
    }
    CrowdingTracker tracker(cut_objs, params.k);
    std::vector<char> cut_alive(cut.size(), 1);
    std::size_t remaining = cut.size();
    while (filled + remaining > params.target_size) {
        const auto r = tracker.most_crowded();
        tracker.remove(r);
        cut_alive[r] = 0;
        --remaining;
    }
    for (std::size_t c = 0; c < cut.size(); ++c) {
        if (cut_alive[c]) {
            keep[cut[c]] = 1;
        }
    }

    std::vector<Solution> out;
    out.reserve(params.target_size);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (keep[i]) {
            out.push_back(std::move(population[i]));
        }
    }
    return out;
}

std::size_t gde3_generation_step(std::vector<Solution>& subpop, const DeParams& de,
                                 std::size_t knn_k, const ParentSampler& sampler,
                                 const ProblemSpec& problem, RngStream& rng,
                                 const TrialObserver& observer) {
    const std::size_t size = subpop.size();
    std::vector<Solution> pool;
    std::vector<Solution> extra;
    pool.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const Solution& s = subpop[i];
        Solution t = problem.evaluate(make_trial(s, sampler, i, de.F, de.CR, rng));
        t.origin_subpop = s.origin_subpop;
        const auto choice = gde3_select(s, t);
        if (observer) {
            observer(TrialEvent{i, s, t, choice != Gde3Choice::keep_s});
        }
        switch (choice) {
            case Gde3Choice::keep_s:
                pool.push_back(s);
                break;
            case Gde3Choice::keep_t:
                pool.push_back(std::move(t));
                break;
            case Gde3Choice::keep_both:
                pool.push_back(s);
                extra.push_back(std::move(t));
                break;
        }
    }
    for (auto& t : extra) {
        pool.push_back(std::move(t));
    }
    subpop = prune(std::move(pool), PruneParams{knn_k, size});
    return size;
}

Gde3RunResult run_gde3(const ProblemSpec& problem, std::size_t pop_size, const DeParams& de,
                       std::size_t knn_k, std::size_t generations, RngStream rng,
                       const TrialObserver& observer) {
    de.validate();
    const std::size_t k = knn_k == 0 ? problem.num_objectives() : knn_k;
    Gde3RunResult result;
    auto init = rng.split(static_cast<std::uint64_t>(RngPurpose::initialization));
    auto vary = rng.split(static_cast<std::uint64_t>(RngPurpose::variation));
    for (std::size_t i = 0; i < pop_size; ++i) {
        result.population.push_back(problem.random_solution(init));
    }
    result.evaluations = pop_size;
    for (std::size_t g = 0; g < generations; ++g) {
        const auto sampler = local_parent_sampler(result.population);
        result.evaluations +=
            gde3_generation_step(result.population, de, k, sampler, problem, vary, observer);
    }
    return result;
}

}  // namespace gsf
