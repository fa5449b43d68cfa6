#include "gsf/assess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "gsf/errors.hpp"
#include "gsf/rng.hpp"

namespace gsf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t common_dimension(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> b) {
    std::size_t m = 0;
    for (auto set : {a, b}) {
        for (const auto& v : set) {
            if (m == 0) {
                m = v.size();
            } else if (v.size() != m) {
                throw DimensionError("objective vectors of different length");
            }
        }
    }
    return m;
}

// Points strictly better than the reference point in every objective.
std::vector<ObjectiveVector> inside(std::span<const ObjectiveVector> points,
                                    std::span<const double> ref) {
    std::vector<ObjectiveVector> out;
    for (const auto& p : points) {
        if (p.size() != ref.size()) {
            throw DimensionError("point and reference point differ in length");
        }
        bool ok = true;
        for (std::size_t i = 0; i < p.size() && ok; ++i) {
            ok = p[i] < ref[i];
        }
        if (ok) {
            out.push_back(p);
        }
    }
    return out;
}

// 2-D staircase of mutually non-dominated points keyed by f1.
class Staircase {
public:
    void insert(double x, double y) {
        auto it = steps_.upper_bound(x);
        if (it != steps_.begin() && std::prev(it)->second <= y) {
            return;
        }
        it = steps_.lower_bound(x);
        while (it != steps_.end() && it->second >= y) {
            it = steps_.erase(it);
        }
        steps_[x] = y;
    }

    [[nodiscard]] double area(double rx, double ry) const {
        double a = 0.0;
        for (auto it = steps_.begin(); it != steps_.end(); ++it) {
            const auto next = std::next(it);
            const double right = next == steps_.end() ? rx : next->first;
            a += (right - it->first) * (ry - it->second);
        }
        return a;
    }

private:
    std::map<double, double> steps_;
};

}  // namespace

double epsilon_indicator(std::span<const ObjectiveVector> T, std::span<const ObjectiveVector> O) {
    if (O.empty()) {
        throw DimensionError("epsilon indicator needs a non-empty reference front");
    }
    common_dimension(T, O);
    if (T.empty()) {
        return kInf;
    }
    double worst = -kInf;
    for (const auto& p : O) {
        double best = kInf;
        for (const auto& a : T) {
            double factor = -kInf;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (a[i] < 0.0 || p[i] < 0.0) {
                    throw std::invalid_argument("epsilon indicator needs non-negative objectives");
                }
                const double r = p[i] > 0.0 ? a[i] / p[i] : (a[i] > 0.0 ? kInf : 1.0);
                factor = std::max(factor, r);
            }
            best = std::min(best, factor);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double hypervolume_2d(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    auto pts = inside(points, ref);
    std::sort(pts.begin(), pts.end());
    double volume = 0.0;
    double prev_y = ref[1];
    for (const auto& p : pts) {
        if (p[1] < prev_y) {
            volume += (ref[0] - p[0]) * (prev_y - p[1]);
            prev_y = p[1];
        }
    }
    return volume;
}

double hypervolume_3d(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    auto pts = inside(points, ref);
    std::sort(pts.begin(), pts.end(),
              [](const ObjectiveVector& a, const ObjectiveVector& b) { return a[2] < b[2]; });
    Staircase stairs;
    double volume = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
        const double z = pts[i][2];
        while (i < pts.size() && pts[i][2] == z) {
            stairs.insert(pts[i][0], pts[i][1]);
            ++i;
        }
        const double next_z = i < pts.size() ? pts[i][2] : ref[2];
        volume += stairs.area(ref[0], ref[1]) * (next_z - z);
    }
    return volume;
}

HypervolumeResult hypervolume_monte_carlo(std::span<const ObjectiveVector> points,
                                          std::span<const double> lower,
                                          std::span<const double> ref, std::size_t samples,
                                          std::uint64_t seed) {
    if (lower.size() != ref.size()) {
        throw DimensionError("box corners differ in length");
    }
    if (samples == 0) {
        throw std::invalid_argument("Monte Carlo hypervolume needs at least one sample");
    }
    const std::size_t m = ref.size();
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        box *= std::max(0.0, ref[i] - lower[i]);
    }
    auto pts = nondominated_filter(inside(points, ref));
    for (auto& p : pts) {
        for (std::size_t i = 0; i < m; ++i) {
            p[i] = std::max(p[i], lower[i]);
        }
    }
    if (pts.empty() || box == 0.0) {
        return {0.0, 0.0};
    }
    // Sorted by f1 so only a prefix can dominate a given sample.
    std::sort(pts.begin(), pts.end());
    std::vector<double> first(pts.size());
    std::vector<double> flat;
    flat.reserve(pts.size() * m);
    for (std::size_t j = 0; j < pts.size(); ++j) {
        first[j] = pts[j][0];
        flat.insert(flat.end(), pts[j].begin(), pts[j].end());
    }
    RngStream rng(seed, 0x4856);
    std::vector<double> s(m);
    std::size_t hits = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = rng.uniform(lower[i], ref[i]);
        }
        const auto end = static_cast<std::size_t>(
            std::upper_bound(first.begin(), first.end(), s[0]) - first.begin());
        for (std::size_t j = 0; j < end; ++j) {
            const double* p = &flat[j * m];
            std::size_t i = 1;
            while (i < m && p[i] <= s[i]) {
                ++i;
            }
            if (i == m) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * frac,
            box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

HypervolumeResult hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref,
                              const HypervolumeOptions& options) {
    const std::size_t m = ref.size();
    if (m < 2) {
        throw UnsupportedDimensionError("hypervolume needs at least two objectives");
    }
    if (m == 2) {
        return {hypervolume_2d(points, ref), 0.0};
    }
    if (m == 3) {
        return {hypervolume_3d(points, ref), 0.0};
    }
    ObjectiveVector lower(ref.begin(), ref.end());
    for (const auto& p : inside(points, ref)) {
        for (std::size_t i = 0; i < m; ++i) {
            lower[i] = std::min(lower[i], p[i]);
        }
    }
    return hypervolume_monte_carlo(points, lower, ref, options.mc_samples, options.seed);
}

ReferenceData::ReferenceData(std::vector<ObjectiveVector> front, HypervolumeOptions options)
    : front_(std::move(front)), options_(options) {
    if (front_.empty()) {
        throw DegenerateReferenceError("reference front is empty");
    }
    const std::size_t m = front_.front().size();
    nadir_.assign(m, -kInf);
    ideal_.assign(m, kInf);
    for (const auto& p : front_) {
        if (p.size() != m) {
            throw DimensionError("reference front points differ in length");
        }
        for (std::size_t i = 0; i < m; ++i) {
            nadir_[i] = std::max(nadir_[i], p[i]);
            ideal_[i] = std::min(ideal_[i], p[i]);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(nadir_[i] > ideal_[i])) {
            throw DegenerateReferenceError("reference front has zero extent in objective " +
                                           std::to_string(i + 1));
        }
    }
}

HypervolumeResult ReferenceData::front_hypervolume() const {
    std::call_once(once_, [this] {
        if (nadir_.size() <= 3) {
            cached_ = hypervolume(front_, nadir_, options_);
        } else {
            cached_ = hypervolume_monte_carlo(front_, ideal_, nadir_, options_.mc_samples,
                                              options_.seed);
        }
    });
    return cached_;
}

HypervolumeResult hypervolume_indicator(std::span<const ObjectiveVector> T,
                                        const ReferenceData& ref, std::uint64_t seed) {
    const auto& nadir = ref.nadir();
    for (const auto& p : T) {
        if (p.size() != nadir.size()) {
            throw DimensionError("approximation set and reference front differ in M");
        }
    }
    const auto front = ref.front_hypervolume();
    HypervolumeResult t;
    if (nadir.size() <= 3) {
        t = hypervolume(T, nadir);
    } else {
        t = hypervolume_monte_carlo(T, ref.ideal(), nadir, ref.options().mc_samples, seed);
    }
    return {front.value - t.value, std::hypot(front.std_error, t.std_error)};
}

std::vector<ObjectiveVector> attainment_surface(
    std::span<const std::vector<ObjectiveVector>> runs, std::size_t level) {
    if (runs.empty()) {
        throw DimensionError("attainment surface needs at least one run");
    }
    if (level == 0 || level > runs.size()) {
        throw std::invalid_argument("attainment level must lie in 1..number of runs");
    }
    std::vector<double> xs;
    for (const auto& run : runs) {
        for (const auto& p : run) {
            if (p.size() != 2) {
                throw UnsupportedDimensionError("attainment surfaces are computed for M=2 only");
            }
            xs.push_back(p[0]);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Per run, the best f2 reachable with f1 <= x, as a sorted step function.
    std::vector<std::vector<std::pair<double, double>>> steps;
    for (const auto& run : runs) {
        std::vector<ObjectiveVector> pts(run.begin(), run.end());
        std::sort(pts.begin(), pts.end());
        std::vector<std::pair<double, double>> st;
        for (const auto& p : pts) {
            if (st.empty() || p[1] < st.back().second) {
                st.emplace_back(p[0], p[1]);
            }
        }
        steps.push_back(std::move(st));
    }
    std::vector<ObjectiveVector> corners;
    std::vector<double> ys(runs.size());
    for (double x : xs) {
        for (std::size_t r = 0; r < steps.size(); ++r) {
            const auto& st = steps[r];
            auto it = std::upper_bound(st.begin(), st.end(), x,
                                       [](double v, const auto& s) { return v < s.first; });
            ys[r] = it == st.begin() ? kInf : std::prev(it)->second;
        }
        std::nth_element(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(level - 1), ys.end());
        const double y = ys[level - 1];
        if (y < kInf && (corners.empty() || y < corners.back()[1])) {
            corners.push_back({x, y});
        }
    }
    return corners;
}

std::vector<ObjectiveVector> attainment_surface_50(
    std::span<const std::vector<ObjectiveVector>> runs) {
    if (runs.size() < 2) {
        throw DimensionError("the 50% attainment surface needs at least two runs");
    }
    return attainment_surface(runs, runs.size() / 2 + 1);
}

std::vector<ObjectiveVector> staircase_polyline(std::span<const ObjectiveVector> corners) {
    std::vector<ObjectiveVector> line;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        if (i > 0) {
            line.push_back({corners[i][0], corners[i - 1][1]});
        }
        line.push_back(corners[i]);
    }
    return line;
}

MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw DimensionError("Mann-Whitney needs at least two values per sample");
    }
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(n);
    for (std::size_t i = 0; i < na; ++i) {
        pooled.emplace_back(a[i], i);
    }
    for (std::size_t i = 0; i < nb; ++i) {
        pooled.emplace_back(b[i], na + i);
    }
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> rank(n);  // midrank by original position
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) {
            ++j;
        }
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            rank[pooled[k].second] = mid;
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double dna = static_cast<double>(na);
    const double dnb = static_cast<double>(nb);
    const double ra = std::accumulate(rank.begin(), rank.begin() + static_cast<std::ptrdiff_t>(na), 0.0);
    MannWhitneyResult res;
    res.u = ra - dna * (dna + 1.0) / 2.0;

    if (pooled.front().first == pooled.back().first) {
        res.p = 0.5;
        res.exact = n <= 12;
        return res;
    }
    if (n <= 12) {
        std::size_t total = 0;
        std::size_t at_most = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != na) {
                continue;
            }
            double r = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (1u << k)) {
                    r += rank[k];
                }
            }
            ++total;
            if (r - dna * (dna + 1.0) / 2.0 <= res.u + 1e-9) {
                ++at_most;
            }
        }
        res.p = static_cast<double>(at_most) / static_cast<double>(total);
        res.exact = true;
        return res;
    }
    const double dn = static_cast<double>(n);
    const double mu = dna * dnb / 2.0;
    const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    const double z = (res.u + 0.5 - mu) / std::sqrt(var);
    res.p = std::min(1.0, 0.5 * std::erfc(-z / std::sqrt(2.0)));
    return res;
}

std::vector<SummaryRow> summarize(std::span<const NamedSample> samples) {
    std::vector<SummaryRow> rows;
    for (const auto& s : samples) {
        if (s.values.empty()) {
            throw DimensionError("summary of '" + s.name + "' has no values");
        }
        SummaryRow row;
        row.name = s.name;
        row.n = s.values.size();
        row.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) /
                   static_cast<double>(row.n);
        if (row.n > 1) {
            double ss = 0.0;
            for (double v : s.values) {
                ss += (v - row.mean) * (v - row.mean);
            }
            row.sd = std::sqrt(ss / static_cast<double>(row.n - 1));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        return rows;
    }
    const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        return x.mean < y.mean;
    });
    const double limit = best->mean + best->sd;
    for (auto& r : rows) {
        r.best = r.mean <= limit;
    }
    return rows;
}

}  // namespace gsf
