#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/de.hpp"
#include "gsf/rng.hpp"

namespace gsf {

struct NoveltyParams {
    std::size_t k = 15;
    /// Initial threshold. When unset, runners derive it from the problem's
    /// objective extent (a tenth of the objective-space diagonal).
    std::optional<double> n_min0;
    double n_inc = 1.1;
    double n_dec = 0.999;
    std::size_t n_a = 1;
    std::size_t n_r = 50000;
    /// Abort (BudgetError) instead of growing past this many entries.
    std::optional<std::size_t> max_entries;

    void validate() const;

    friend bool operator==(const NoveltyParams&, const NoveltyParams&) = default;
};

/// Threshold used when NoveltyParams::n_min0 is unset.
double default_novelty_threshold(const ProblemSpec& problem);

struct ArchiveEntry {
    DecisionVector x;
    ObjectiveVector f;
    std::size_t generation = 0;
    double n_min_at_acceptance = 0.0;
    double score = 0.0;
};

enum class OfferOutcome { accepted, rejected, ineligible };

/// Append-only novelty archive over objective space with the adaptive
/// acceptance threshold.
///
/// Threshold dynamics: after an acceptance, if more than n_a members have
/// entered since the last increase, n_min is multiplied by n_inc; after n_r
/// consecutive rejections it is multiplied by n_dec. Both counters reset when
/// they fire. The threshold is kept as n_min0 * n_inc^A * n_dec^R so it is
/// reproducible from the adjustment counts alone.
class NoveltyArchive {
public:
    NoveltyArchive(NoveltyParams params, double n_min0);

    /// Infeasible candidates are ineligible and leave all counters untouched.
    OfferOutcome offer(const Solution& candidate);

    /// Mean distance to the k nearest entries; +inf on an empty archive.
    [[nodiscard]] double score(std::span<const double> behavior) const;
    [[nodiscard]] double score(std::span<const double> behavior, std::size_t k) const;

    [[nodiscard]] double n_min() const noexcept;
    [[nodiscard]] double n_min0() const noexcept { return n_min0_; }
    [[nodiscard]] std::size_t increases() const noexcept { return increases_; }
    [[nodiscard]] std::size_t decreases() const noexcept { return decreases_; }
    [[nodiscard]] std::size_t accepted_since_check() const noexcept { return accepted_since_; }
    [[nodiscard]] std::size_t rejected_streak() const noexcept { return rejected_streak_; }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] const NoveltyParams& params() const noexcept { return params_; }

    /// Generation stamped on subsequently accepted entries.
    void set_generation(std::size_t g) noexcept { generation_ = g; }

    [[nodiscard]] Solution entry_solution(std::size_t i) const;

    /// Non-dominated entries, in acceptance order.
    [[nodiscard]] std::vector<Solution> nondominated() const;

    /// One line per entry: x..., f..., generation, n_min at acceptance.
    void dump(std::ostream& os) const;

private:
    NoveltyParams params_;
    double n_min0_;
    std::vector<ArchiveEntry> entries_;
    std::vector<double> behaviors_;  // flattened f of all entries
    std::size_t dims_ = 0;
    std::size_t accepted_since_ = 0;
    std::size_t rejected_streak_ = 0;
    std::size_t increases_ = 0;
    std::size_t decreases_ = 0;
    std::size_t generation_ = 0;
};

/// p(x) = (1/k) * sum of distances to the k nearest archive entries.
double novelty_score(std::span<const double> behavior, const NoveltyArchive& archive,
                     std::size_t k);

/// Offers a candidate somewhere; returns whether it entered an archive.
using ArchiveOffer = std::function<bool(const Solution&)>;

/// One MONA generation: a DE trial per member, each offered through `offer`,
/// then the population is replaced by uniform draws (with replacement) from
/// the archive. Returns the number of evaluations.
std::size_t mona_generation_step(std::vector<Solution>& subpop, const DeParams& de,
                                 const NoveltyArchive& archive, const ParentSampler& sampler,
                                 const ProblemSpec& problem, RngStream& rng,
                                 const ArchiveOffer& offer, const TrialObserver& observer = {});

}  // namespace gsf
