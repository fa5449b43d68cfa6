#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>

#include "gsf/core.hpp"

namespace gsf {

/// Angular histogram of parent->offspring vectors in a bi-objective space.
/// Angles are measured from the +f1 axis, so 180 deg improves f1 alone and
/// 270 deg improves f2 alone.
class ForceHistogram {
public:
    static constexpr std::size_t kBins = 36;
    static constexpr double kBinWidth = 360.0 / kBins;

    /// Throws UnsupportedDimensionError unless both vectors have two objectives.
    void record(const Solution& parent, const Solution& offspring);

    /// Adds one force with the given angle in degrees (any real; wrapped).
    void record_angle(double degrees);

    void merge(const ForceHistogram& other);

    [[nodiscard]] const std::array<std::size_t, kBins>& bins() const noexcept { return bins_; }
    [[nodiscard]] std::size_t unfeasible_excluded() const noexcept { return unfeasible_; }
    [[nodiscard]] std::size_t zero_modulus_excluded() const noexcept { return zero_; }
    [[nodiscard]] std::size_t total_offered() const noexcept { return offered_; }
    [[nodiscard]] std::size_t binned() const noexcept;

    /// Share of binned forces whose angle lies in quadrant q (0: [0,90), ...).
    /// Zero when nothing is binned.
    [[nodiscard]] double quadrant_share(std::size_t q) const;

    /// 36 lines "bin_start count", then "# offered ... unfeasible ... zero_modulus ...".
    void write(std::ostream& os) const;

    static std::size_t bin_of(double degrees);

    /// Rebuilds a histogram from stored counts; offered = bins + exclusions.
    static ForceHistogram from_counts(const std::array<std::size_t, kBins>& bins,
                                      std::size_t unfeasible, std::size_t zero_modulus);

private:
    std::array<std::size_t, kBins> bins_{};
    std::size_t unfeasible_ = 0;
    std::size_t zero_ = 0;
    std::size_t offered_ = 0;
};

ForceHistogram& record_force(ForceHistogram& hist, const Solution& parent,
                             const Solution& offspring);

struct ExclusionReport {
    double unfeasible_percent = 0.0;
    double zero_modulus_percent = 0.0;
};

/// Exclusion percentages relative to all offered forces. StateError when empty.
ExclusionReport exclusion_report(const ForceHistogram& hist);

}  // namespace gsf
