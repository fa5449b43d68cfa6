#include "gsf/wfg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "gsf/errors.hpp"

namespace gsf::wfg {

namespace detail {
namespace {

constexpr double kPi = std::numbers::pi;

double correct_to_01(double a) {
    constexpr double eps = 1.0e-10;
    if (a < 0.0 && a >= -eps) {
        return 0.0;
    }
    if (a > 1.0 && a <= 1.0 + eps) {
        return 1.0;
    }
    return a;
}

}  // namespace

double s_linear(double y, double A) {
    return correct_to_01(std::fabs(y - A) / std::fabs(std::floor(A - y) + A));
}

double s_decept(double y, double A, double B, double C) {
    const double tmp1 = std::floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B);
    const double tmp2 = std::floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B);
    return correct_to_01(1.0 + (std::fabs(y - A) - B) * (tmp1 + tmp2 + 1.0 / B));
}

double s_multi(double y, double A, double B, double C) {
    const double tmp1 = std::fabs(y - C) / (2.0 * (std::floor(C - y) + C));
    const double tmp2 = (4.0 * A + 2.0) * kPi * (0.5 - tmp1);
    return correct_to_01((1.0 + std::cos(tmp2) + 4.0 * B * tmp1 * tmp1) / (B + 2.0));
}

double b_poly(double y, double alpha) {
    return correct_to_01(std::pow(y, alpha));
}

double b_flat(double y, double A, double B, double C) {
    const double v = A + std::min(0.0, std::floor(y - B)) * A * (B - y) / B -
                     std::min(0.0, std::floor(C - y)) * (1.0 - A) * (y - C) / (1.0 - C);
    return correct_to_01(v);
}

namespace {
double b_param_exponent(double u, double A, double B, double C) {
    const double v = A - (1.0 - 2.0 * u) * std::fabs(std::floor(0.5 - u) + A);
    return B + (C - B) * v;
}
}  // namespace

double b_param(double y, double u, double A, double B, double C) {
    return correct_to_01(std::pow(y, b_param_exponent(u, A, B, C)));
}

double r_sum(std::span<const double> y, std::span<const double> w) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += w[i] * y[i];
        den += w[i];
    }
    return correct_to_01(num / den);
}

double r_nonsep(std::span<const double> y, std::size_t A) {
    const std::size_t m = y.size();
    double num = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        num += y[j];
        for (std::size_t k = 0; k + 1 < A; ++k) {
            num += std::fabs(y[j] - y[(1 + j + k) % m]);
        }
    }
    const double a = static_cast<double>(A);
    const double half = std::ceil(a / 2.0);
    const double den = static_cast<double>(m) * half * (1.0 + 2.0 * a - 2.0 * half) / a;
    return correct_to_01(num / den);
}

}  // namespace detail

namespace {

using namespace detail;

constexpr double kPi = std::numbers::pi;
constexpr double kParamA = 0.98 / 49.98;
constexpr double kParamB = 0.02;
constexpr double kParamC = 50.0;

double mean_of(std::span<const double> y) {
    double s = 0.0;
    for (double v : y) {
        s += v;
    }
    return s / static_cast<double>(y.size());
}

double r_sum_uniform(std::span<const double> y) {
    return detail::correct_to_01(mean_of(y));
}

enum class Shape { convex, concave, linear };

// h_m for m in 1..M over position coordinates p (length M-1).
double shape_value(Shape shape, std::span<const double> p, std::size_t m) {
    const std::size_t mp = p.size();
    auto first = [&](double v) {
        switch (shape) {
            case Shape::convex: return 1.0 - std::cos(0.5 * v * kPi);
            case Shape::concave: return std::sin(0.5 * v * kPi);
            case Shape::linear: return v;
        }
        return 0.0;
    };
    auto last = [&](double v) {
        switch (shape) {
            case Shape::convex: return 1.0 - std::sin(0.5 * v * kPi);
            case Shape::concave: return std::cos(0.5 * v * kPi);
            case Shape::linear: return 1.0 - v;
        }
        return 0.0;
    };
    double r = 1.0;
    if (m == 1) {
        for (std::size_t i = 0; i < mp; ++i) {
            r *= first(p[i]);
        }
    } else if (m <= mp) {
        for (std::size_t i = 0; i < mp - m + 1; ++i) {
            r *= first(p[i]);
        }
        r *= last(p[mp - m + 1]);
    } else {
        r = last(p[0]);
    }
    return detail::correct_to_01(r);
}

double shape_mixed(double x, double A, double alpha) {
    const double aux = 2.0 * A * kPi;
    return detail::correct_to_01(std::pow(1.0 - x - std::cos(aux * x + 0.5 * kPi) / aux, alpha));
}

double shape_disc(double x, double alpha, double beta, double A) {
    const double c = std::cos(A * kPi * std::pow(x, beta));
    return detail::correct_to_01(1.0 - std::pow(x, alpha) * c * c);
}

// Reduction of the position block into M-1 values, each over `gap` consecutive entries.
template <typename Reduce>
std::vector<double> reduce_groups(std::span<const double> y, std::size_t k, std::size_t M,
                                  Reduce&& reduce) {
    const std::size_t gap = k / (M - 1);
    std::vector<double> t;
    t.reserve(M);
    for (std::size_t m = 0; m + 1 < M; ++m) {
        t.push_back(reduce(y.subspan(m * gap, gap)));
    }
    return t;
}

ObjectiveVector finish(const Instance& inst, std::span<const double> t, Shape shape) {
    const std::size_t M = inst.M;
    const double tm = t[M - 1];
    std::vector<double> x(M);
    for (std::size_t i = 0; i + 1 < M; ++i) {
        const double a = (inst.problem == 3 && i > 0) ? 0.0 : 1.0;
        x[i] = std::max(tm, a) * (t[i] - 0.5) + 0.5;
    }
    x[M - 1] = tm;
    const std::span<const double> p(x.data(), M - 1);
    ObjectiveVector f(M);
    for (std::size_t m = 1; m <= M; ++m) {
        double h = 0.0;
        if (m < M || shape != Shape::convex) {
            h = shape_value(shape, p, m);
        } else if (inst.problem == 1) {
            h = shape_mixed(p[0], 5.0, 1.0);
        } else {
            h = shape_disc(p[0], 1.0, 1.0, 5.0);
        }
        f[m - 1] = x[M - 1] + 2.0 * static_cast<double>(m) * h;
    }
    return f;
}

ObjectiveVector eval_wfg1(const Instance& inst, std::vector<double> y) {
    const std::size_t k = inst.k;
    const std::size_t n = y.size();
    for (std::size_t i = k; i < n; ++i) {
        y[i] = s_linear(y[i], 0.35);
    }
    for (std::size_t i = k; i < n; ++i) {
        y[i] = b_flat(y[i], 0.8, 0.75, 0.85);
    }
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = b_poly(y[i], 0.02);
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 2.0 * static_cast<double>(i + 1);
    }
    const std::span<const double> ys(y);
    const std::span<const double> ws(w);
    const std::size_t gap = k / (inst.M - 1);
    std::vector<double> t;
    for (std::size_t m = 0; m + 1 < inst.M; ++m) {
        t.push_back(r_sum(ys.subspan(m * gap, gap), ws.subspan(m * gap, gap)));
    }
    t.push_back(r_sum(ys.subspan(k), ws.subspan(k)));
    return finish(inst, t, Shape::convex);
}

// Shared by WFG2 and WFG3.
ObjectiveVector eval_wfg2_3(const Instance& inst, std::vector<double> y, Shape shape) {
    const std::size_t k = inst.k;
    const std::size_t n = y.size();
    for (std::size_t i = k; i < n; ++i) {
        y[i] = s_linear(y[i], 0.35);
    }
    std::vector<double> y2(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k));
    const std::size_t half = inst.l / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const std::span<const double> pair(&y[k + 2 * i], 2);
        y2.push_back(r_nonsep(pair, 2));
    }
    auto t = reduce_groups(y2, k, inst.M, r_sum_uniform);
    t.push_back(r_sum_uniform(std::span<const double>(y2).subspan(k, half)));
    return finish(inst, t, shape);
}

ObjectiveVector eval_concave_rsum(const Instance& inst, const std::vector<double>& y) {
    auto t = reduce_groups(y, inst.k, inst.M, r_sum_uniform);
    t.push_back(r_sum_uniform(std::span<const double>(y).subspan(inst.k)));
    return finish(inst, t, Shape::concave);
}

ObjectiveVector eval_concave_nonsep(const Instance& inst, const std::vector<double>& y) {
    const std::size_t gap = inst.k / (inst.M - 1);
    auto t = reduce_groups(y, inst.k, inst.M,
                           [gap](std::span<const double> g) { return r_nonsep(g, gap); });
    t.push_back(r_nonsep(std::span<const double>(y).subspan(inst.k), inst.l));
    return finish(inst, t, Shape::concave);
}

}  // namespace

void Instance::validate() const {
    if (problem < 1 || problem > 9) {
        throw DimensionError("WFG problem index must be in 1..9, got " + std::to_string(problem));
    }
    if (M < 2) {
        throw DimensionError("WFG instances need at least two objectives");
    }
    if (k == 0 || k % (M - 1) != 0) {
        throw DimensionError("WFG position count k must be a positive multiple of M-1");
    }
    if (l == 0) {
        throw DimensionError("WFG distance count l must be positive");
    }
    if ((problem == 2 || problem == 3) && l % 2 != 0) {
        throw DimensionError("WFG2 and WFG3 need an even number of distance parameters");
    }
}

ObjectiveVector evaluate(const Instance& inst, std::span<const double> z) {
    inst.validate();
    if (z.size() != inst.n()) {
        throw DimensionError("WFG input has length " + std::to_string(z.size()) + ", expected " +
                             std::to_string(inst.n()));
    }
    const std::size_t n = z.size();
    const std::size_t k = inst.k;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = z[i] / (2.0 * static_cast<double>(i + 1));
    }
    switch (inst.problem) {
        case 1:
            return eval_wfg1(inst, std::move(y));
        case 2:
            return eval_wfg2_3(inst, std::move(y), Shape::convex);
        case 3:
            return eval_wfg2_3(inst, std::move(y), Shape::linear);
        case 4:
            for (auto& v : y) {
                v = s_multi(v, 30.0, 10.0, 0.35);
            }
            return eval_concave_rsum(inst, y);
        case 5:
            for (auto& v : y) {
                v = s_decept(v, 0.35, 0.001, 0.05);
            }
            return eval_concave_rsum(inst, y);
        case 6:
            for (std::size_t i = k; i < n; ++i) {
                y[i] = s_linear(y[i], 0.35);
            }
            return eval_concave_nonsep(inst, y);
        case 7: {
            std::vector<double> t1 = y;
            for (std::size_t i = 0; i < k; ++i) {
                const double u = r_sum_uniform(std::span<const double>(y).subspan(i + 1));
                t1[i] = b_param(y[i], u, kParamA, kParamB, kParamC);
            }
            for (std::size_t i = k; i < n; ++i) {
                t1[i] = s_linear(t1[i], 0.35);
            }
            return eval_concave_rsum(inst, t1);
        }
        case 8: {
            std::vector<double> t1 = y;
            for (std::size_t i = k; i < n; ++i) {
                const double u = r_sum_uniform(std::span<const double>(y).first(i));
                t1[i] = b_param(y[i], u, kParamA, kParamB, kParamC);
            }
            for (std::size_t i = k; i < n; ++i) {
                t1[i] = s_linear(t1[i], 0.35);
            }
            return eval_concave_rsum(inst, t1);
        }
        case 9: {
            std::vector<double> t1 = y;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double u = r_sum_uniform(std::span<const double>(y).subspan(i + 1));
                t1[i] = b_param(y[i], u, kParamA, kParamB, kParamC);
            }
            for (std::size_t i = 0; i < n; ++i) {
                t1[i] = i < k ? s_decept(t1[i], 0.35, 0.001, 0.05)
                              : s_multi(t1[i], 30.0, 95.0, 0.35);
            }
            return eval_concave_nonsep(inst, t1);
        }
        default:
            break;
    }
    throw DimensionError("unreachable WFG problem index");
}

DecisionVector optimal_solution(const Instance& inst, std::span<const double> position) {
    inst.validate();
    if (position.size() != inst.k) {
        throw DimensionError("expected " + std::to_string(inst.k) + " position values");
    }
    const std::size_t n = inst.n();
    const std::size_t k = inst.k;
    std::vector<double> y(position.begin(), position.end());
    y.resize(n, 0.35);
    auto solve = [](double u) {
        // b_param(y, u) == 0.35  <=>  y = 0.35^(1/exponent(u))
        const double v = kParamA - (1.0 - 2.0 * u) * std::fabs(std::floor(0.5 - u) + kParamA);
        return std::pow(0.35, 1.0 / (kParamB + (kParamC - kParamB) * v));
    };
    if (inst.problem == 8) {
        for (std::size_t i = k; i < n; ++i) {
            y[i] = solve(mean_of(std::span<const double>(y).first(i)));
        }
    } else if (inst.problem == 9) {
        y[n - 1] = 0.35;
        for (std::size_t i = n - 1; i-- > k;) {
            y[i] = solve(mean_of(std::span<const double>(y).subspan(i + 1)));
        }
    }
    DecisionVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = y[i] * 2.0 * static_cast<double>(i + 1);
    }
    return z;
}

DecisionVector random_optimal_solution(const Instance& inst, RngStream& rng) {
    std::vector<double> pos(inst.k);
    for (auto& p : pos) {
        p = rng.uniform();
        // The polynomial bias of WFG1 squeezes uniform positions against the
        // front's end; pre-warping keeps the transformed positions uniform.
        if (inst.problem == 1) {
            p = std::pow(p, 50.0);
        }
    }
    return optimal_solution(inst, pos);
}

std::vector<ObjectiveVector> front_samples(const Instance& inst, std::size_t count,
                                           RngStream& rng) {
    std::vector<ObjectiveVector> pts;
    pts.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        pts.push_back(evaluate(inst, random_optimal_solution(inst, rng)));
    }
    return nondominated_filter(pts);
}

ProblemSpec make_problem(const Instance& inst) {
    inst.validate();
    std::vector<double> lower(inst.n(), 0.0);
    std::vector<double> upper(inst.n());
    for (std::size_t i = 0; i < upper.size(); ++i) {
        upper[i] = 2.0 * static_cast<double>(i + 1);
    }
    ProblemSpec spec("WFG" + std::to_string(inst.problem), inst.M, std::move(lower),
                     std::move(upper),
                     [inst](std::span<const double> z) { return evaluate(inst, z); });
    // f_m = x_M + 2m h_m with x_M, h_m in [0,1].
    ObjectiveVector extent(inst.M);
    for (std::size_t m = 0; m < inst.M; ++m) {
        extent[m] = 2.0 * static_cast<double>(m + 1) + 1.0;
    }
    spec.objective_extent = std::move(extent);
    return spec;
}

int parse_problem_name(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s.size() == 4 && s.rfind("WFG", 0) == 0 && s[3] >= '1' && s[3] <= '9') {
        return s[3] - '0';
    }
    throw ConfigError("unknown problem '" + std::string(name) + "' (expected WFG1..WFG9)");
}

}  // namespace gsf::wfg
