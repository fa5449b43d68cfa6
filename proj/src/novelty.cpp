#include "gsf/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <string>

#include "gsf/errors.hpp"

namespace gsf {

void NoveltyParams::validate() const {
    if (k == 0) {
        throw ConfigError("novelty k must be at least 1");
    }
    if (!(n_inc > 1.0)) {
        throw ConfigError("n_inc must be greater than 1");
    }
    if (!(n_dec > 0.0 && n_dec < 1.0)) {
        throw ConfigError("n_dec must lie strictly between 0 and 1");
    }
    if (n_a == 0 || n_r == 0) {
        throw ConfigError("n_a and n_r must be positive");
    }
    if (n_min0 && !(*n_min0 > 0.0)) {
        throw ConfigError("initial novelty threshold must be positive");
    }
}

double default_novelty_threshold(const ProblemSpec& problem) {
    if (!problem.objective_extent) {
        return 0.1;
    }
    double sq = 0.0;
    for (double e : *problem.objective_extent) {
        sq += e * e;
    }
    return 0.1 * std::sqrt(sq);
}

NoveltyArchive::NoveltyArchive(NoveltyParams params, double n_min0)
    : params_(std::move(params)), n_min0_(n_min0) {
    params_.validate();
    if (!(n_min0_ > 0.0)) {
        throw ConfigError("initial novelty threshold must be positive");
    }
}

double NoveltyArchive::n_min() const noexcept {
    return n_min0_ * std::pow(params_.n_inc, static_cast<double>(increases_)) *
           std::pow(params_.n_dec, static_cast<double>(decreases_));
}

double NoveltyArchive::score(std::span<const double> behavior) const {
    return score(behavior, params_.k);
}

double NoveltyArchive::score(std::span<const double> behavior, std::size_t k) const {
    if (entries_.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    if (k == 0) {
        throw ConfigError("novelty k must be at least 1");
    }
    if (behavior.size() != dims_) {
        throw DimensionError("behaviour vector length does not match archive entries");
    }
    const std::size_t n = entries_.size();
    const std::size_t keff = std::min(k, n);
    // Max-heap of the keff smallest squared distances seen so far.
    std::priority_queue<double> heap;
    for (std::size_t e = 0; e < n; ++e) {
        const double* b = &behaviors_[e * dims_];
        double sq = 0.0;
        for (std::size_t d = 0; d < dims_; ++d) {
            const double diff = behavior[d] - b[d];
            sq += diff * diff;
        }
        if (heap.size() < keff) {
            heap.push(sq);
        } else if (sq < heap.top()) {
            heap.pop();
            heap.push(sq);
        }
    }
    std::vector<double> nearest;
    nearest.reserve(keff);
    while (!heap.empty()) {
        nearest.push_back(std::sqrt(heap.top()));
        heap.pop();
    }
    // Sum smallest first for a result independent of archive order.
    std::sort(nearest.begin(), nearest.end());
    double sum = 0.0;
    for (double d : nearest) {
        sum += d;
    }
    return sum / static_cast<double>(keff);
}

OfferOutcome NoveltyArchive::offer(const Solution& candidate) {
    if (!candidate.evaluated()) {
        throw StateError("only evaluated solutions can be offered to the archive");
    }
    if (!candidate.feasible()) {
        return OfferOutcome::ineligible;
    }
    const auto& f = candidate.f();
    if (entries_.empty()) {
        dims_ = f.size();
    }
    const double threshold = n_min();
    const double s = score(f);
    if (s > threshold) {
        if (params_.max_entries && entries_.size() >= *params_.max_entries) {
            throw BudgetError("novelty archive reached its cap of " +
                              std::to_string(*params_.max_entries) + " entries");
        }
        entries_.push_back(ArchiveEntry{candidate.x(), f, generation_, threshold, s});
        behaviors_.insert(behaviors_.end(), f.begin(), f.end());
        rejected_streak_ = 0;
        if (++accepted_since_ > params_.n_a) {
            ++increases_;
            accepted_since_ = 0;
        }
        return OfferOutcome::accepted;
    }
    if (++rejected_streak_ >= params_.n_r) {
        ++decreases_;
        rejected_streak_ = 0;
    }
    return OfferOutcome::rejected;
}

Solution NoveltyArchive::entry_solution(std::size_t i) const {
    const auto& e = entries_.at(i);
    return Solution(e.x, e.f, true);
}

std::vector<Solution> NoveltyArchive::nondominated() const {
    std::vector<ObjectiveVector> objs;
    objs.reserve(entries_.size());
    for (const auto& e : entries_) {
        objs.push_back(e.f);
    }
    std::vector<Solution> out;
    for (auto i : nondominated_indices(objs)) {
        out.push_back(entry_solution(i));
    }
    return out;
}

void NoveltyArchive::dump(std::ostream& os) const {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    for (const auto& e : entries_) {
        for (double v : e.x) {
            os << v << ' ';
        }
        for (double v : e.f) {
            os << v << ' ';
        }
        os << e.generation << ' ' << e.n_min_at_acceptance << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

double novelty_score(std::span<const double> behavior, const NoveltyArchive& archive,
                     std::size_t k) {
    return archive.score(behavior, k);
}

std::size_t mona_generation_step(std::vector<Solution>& subpop, const DeParams& de,
                                 const NoveltyArchive& archive, const ParentSampler& sampler,
                                 const ProblemSpec& problem, RngStream& rng,
                                 const ArchiveOffer& offer, const TrialObserver& observer) {
    if (subpop.empty()) {
        throw ConfigError("MONA subpopulation must not be empty");
    }
    for (std::size_t i = 0; i < subpop.size(); ++i) {
        const Solution& parent = subpop[i];
        Solution trial = problem.evaluate(make_trial(parent, sampler, i, de.F, de.CR, rng));
        trial.origin_subpop = parent.origin_subpop;
        const bool entered = offer ? offer(trial) : false;
        if (observer) {
            observer(TrialEvent{i, parent, trial, entered});
        }
    }
    const std::size_t evaluations = subpop.size();
    if (!archive.empty()) {
        const auto origin = subpop.front().origin_subpop;
        for (auto& member : subpop) {
            member = archive.entry_solution(rng.uniform_index(archive.size()));
            member.origin_subpop = origin;
        }
    }
    return evaluations;
}

}  // namespace gsf
