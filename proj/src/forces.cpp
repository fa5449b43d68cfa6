#include "gsf/forces.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "gsf/errors.hpp"

namespace gsf {

std::size_t ForceHistogram::bin_of(double degrees) {
    double d = std::fmod(degrees, 360.0);
    if (d < 0.0) {
        d += 360.0;
    }
    const auto b = static_cast<std::size_t>(std::floor(d / kBinWidth));
    // fmod of a value just below 360 can round up to exactly 360.
    return b < kBins ? b : 0;
}

void ForceHistogram::record(const Solution& parent, const Solution& offspring) {
    const auto& pf = parent.f();
    if (pf.size() != 2 || (offspring.evaluated() && offspring.f().size() != 2)) {
        throw UnsupportedDimensionError("force histograms are defined for two objectives only");
    }
    ++offered_;
    if (!offspring.feasible()) {
        ++unfeasible_;
        return;
    }
    const auto& of = offspring.f();
    const double d1 = of[0] - pf[0];
    const double d2 = of[1] - pf[1];
    if (d1 == 0.0 && d2 == 0.0) {
        ++zero_;
        return;
    }
    ++bins_[bin_of(std::atan2(d2, d1) * 180.0 / std::numbers::pi)];
}

void ForceHistogram::record_angle(double degrees) {
    ++offered_;
    ++bins_[bin_of(degrees)];
}

ForceHistogram ForceHistogram::from_counts(const std::array<std::size_t, kBins>& bins,
                                           std::size_t unfeasible, std::size_t zero_modulus) {
    ForceHistogram h;
    h.bins_ = bins;
    h.unfeasible_ = unfeasible;
    h.zero_ = zero_modulus;
    h.offered_ = h.binned() + unfeasible + zero_modulus;
    return h;
}

void ForceHistogram::merge(const ForceHistogram& other) {
    for (std::size_t b = 0; b < kBins; ++b) {
        bins_[b] += other.bins_[b];
    }
    unfeasible_ += other.unfeasible_;
    zero_ += other.zero_;
    offered_ += other.offered_;
}

std::size_t ForceHistogram::binned() const noexcept {
    return std::accumulate(bins_.begin(), bins_.end(), std::size_t{0});
}

double ForceHistogram::quadrant_share(std::size_t q) const {
    if (q >= 4) {
        throw IndexError("quadrant index must be 0..3");
    }
    const std::size_t total = binned();
    if (total == 0) {
        return 0.0;
    }
    constexpr std::size_t per = kBins / 4;
    std::size_t sum = 0;
    for (std::size_t b = q * per; b < (q + 1) * per; ++b) {
        sum += bins_[b];
    }
    return static_cast<double>(sum) / static_cast<double>(total);
}

void ForceHistogram::write(std::ostream& os) const {
    for (std::size_t b = 0; b < kBins; ++b) {
        os << static_cast<double>(b) * kBinWidth << ' ' << bins_[b] << '\n';
    }
    os << "# offered " << offered_ << " unfeasible " << unfeasible_ << " zero_modulus " << zero_
       << '\n';
}

ForceHistogram& record_force(ForceHistogram& hist, const Solution& parent,
                             const Solution& offspring) {
    hist.record(parent, offspring);
    return hist;
}

ExclusionReport exclusion_report(const ForceHistogram& hist) {
    if (hist.total_offered() == 0) {
        throw StateError("exclusion report of an empty force histogram is undefined");
    }
    const double total = static_cast<double>(hist.total_offered());
    return {100.0 * static_cast<double>(hist.unfeasible_excluded()) / total,
            100.0 * static_cast<double>(hist.zero_modulus_excluded()) / total};
}

}  // namespace gsf
