#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsf/core.hpp"

namespace gsf {

/// Multiplicative epsilon indicator: the smallest eps such that every p in O
/// is eps-dominated (a_i <= eps * p_i for all i) by some a in T.
/// A zero reference coordinate contributes +inf when a_i > 0 and 1 otherwise.
/// Returns +inf for an empty T. DimensionError on an empty O or ragged input.
double epsilon_indicator(std::span<const ObjectiveVector> T, std::span<const ObjectiveVector> O);

struct HypervolumeResult {
    double value = 0.0;
    double std_error = 0.0;  ///< zero for exact computations
};

struct HypervolumeOptions {
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 0;
};

/// Volume dominated by `points` and bounded by `ref`. Points not strictly
/// better than ref in every objective are ignored. Exact for M <= 3, Monte
/// Carlo over [lower, ref] for M >= 4 (lower defaults to the points' ideal).
HypervolumeResult hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref,
                              const HypervolumeOptions& options = {});

double hypervolume_2d(std::span<const ObjectiveVector> points, std::span<const double> ref);
double hypervolume_3d(std::span<const ObjectiveVector> points, std::span<const double> ref);
HypervolumeResult hypervolume_monte_carlo(std::span<const ObjectiveVector> points,
                                          std::span<const double> lower,
                                          std::span<const double> ref, std::size_t samples,
                                          std::uint64_t seed);

/// Sampled optimal front with its nadir point (the hypervolume reference).
class ReferenceData {
public:
    /// Throws DegenerateReferenceError when the front has zero extent in any objective.
    explicit ReferenceData(std::vector<ObjectiveVector> front, HypervolumeOptions options = {});

    [[nodiscard]] const std::vector<ObjectiveVector>& front() const noexcept { return front_; }
    [[nodiscard]] const ObjectiveVector& nadir() const noexcept { return nadir_; }
    [[nodiscard]] const ObjectiveVector& ideal() const noexcept { return ideal_; }
    [[nodiscard]] const HypervolumeOptions& options() const noexcept { return options_; }

    /// HV of the front w.r.t. the nadir, computed once and cached (thread-safe).
    [[nodiscard]] HypervolumeResult front_hypervolume() const;

private:
    std::vector<ObjectiveVector> front_;
    ObjectiveVector nadir_;
    ObjectiveVector ideal_;
    HypervolumeOptions options_;
    mutable std::once_flag once_;
    mutable HypervolumeResult cached_;
};

/// HV(front) - HV(T), both w.r.t. the nadir. For M >= 4 the Monte Carlo box is
/// [ideal(front), nadir] and `seed` drives the sampling of T.
HypervolumeResult hypervolume_indicator(std::span<const ObjectiveVector> T,
                                        const ReferenceData& ref, std::uint64_t seed = 0);

/// Corner points (x ascending, y strictly descending) of the boundary of the
/// region weakly dominated by at least `level` of the runs. M = 2 only.
std::vector<ObjectiveVector> attainment_surface(
    std::span<const std::vector<ObjectiveVector>> runs, std::size_t level);

/// Median surface at level floor(R/2)+1, i.e. attained by a strict majority of
/// the runs (two runs give the intersection of their dominated regions).
std::vector<ObjectiveVector> attainment_surface_50(
    std::span<const std::vector<ObjectiveVector>> runs);

/// Staircase vertices through the corners, suitable for plotting as a polyline.
std::vector<ObjectiveVector> staircase_polyline(std::span<const ObjectiveVector> corners);

struct MannWhitneyResult {
    double u = 0.0;  ///< U statistic of the first sample (midranks)
    double p = 0.5;  ///< one-sided p for "first sample is stochastically smaller"
    bool exact = false;
};

/// One-sided Mann-Whitney test. Exact permutation p when |a|+|b| <= 12,
/// otherwise the normal approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b);

struct SummaryRow {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    bool best = false;  ///< best mean, or within one sd of it (smaller is better)
};

struct NamedSample {
    std::string name;
    std::vector<double> values;
};

std::vector<SummaryRow> summarize(std::span<const NamedSample> samples);

}  // namespace gsf
