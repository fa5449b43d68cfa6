#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsf/assess.hpp"
#include "gsf/core.hpp"
#include "gsf/errors.hpp"
#include "gsf/rng.hpp"
#include "oracles.hpp"

using namespace gsf;

namespace {

std::vector<ObjectiveVector> random_points(RngStream& r, std::size_t n, std::size_t m,
                                           double lo = 0.1, double hi = 2.0) {
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts) {
        for (auto& v : p) {
            v = r.uniform(lo, hi);
        }
    }
    return pts;
}

// Non-dominated points on a noisy concave curve.
std::vector<ObjectiveVector> random_front(RngStream& r, std::size_t n) {
    std::vector<ObjectiveVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = r.uniform();
        const double s = 1.0 + 0.1 * r.uniform();
        pts.push_back({s * t, s * std::sqrt(1.0 - t * t)});
    }
    return nondominated_filter(pts);
}

}  // namespace

TEST_CASE("epsilon indicator examples") {
    const std::vector<ObjectiveVector> o{{1, 2}};
    const std::vector<ObjectiveVector> t{{2, 4}};
    CHECK(epsilon_indicator(t, o) == 2.0);
    const std::vector<ObjectiveVector> same{{1, 3}, {2, 2}, {3, 1}};
    CHECK(epsilon_indicator(same, same) == 1.0);
    CHECK(std::isinf(epsilon_indicator(std::vector<ObjectiveVector>{}, o)));
    CHECK_THROWS_AS(epsilon_indicator(t, std::vector<ObjectiveVector>{}), DimensionError);
    CHECK_THROWS_AS(epsilon_indicator(std::vector<ObjectiveVector>{{1, 2, 3}}, o), DimensionError);
}

TEST_CASE("epsilon indicator matches bisection") {
    RngStream r(101, 0);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 2 + r.uniform_index(4);
        const auto T = random_points(r, 1 + r.uniform_index(20), m);
        const auto O = random_points(r, 1 + r.uniform_index(20), m);
        const double eps = epsilon_indicator(T, O);
        REQUIRE(std::abs(eps - oracle::epsilon_bisection(T, O)) <= 1e-9 * std::max(1.0, eps));
    }
}

TEST_CASE("hypervolume examples") {
    const std::vector<ObjectiveVector> two{{1, 2}, {2, 1}};
    const std::vector<double> ref{3, 3};
    CHECK(hypervolume_2d(two, ref) == 3.0);
    CHECK(hypervolume(two, ref).value == 3.0);
    CHECK(hypervolume_2d(std::vector<ObjectiveVector>{{3, 1}, {4, 0}}, ref) == 0.0);
    CHECK(hypervolume_3d(std::vector<ObjectiveVector>{{1, 1, 1}}, std::vector<double>{2, 3, 4}) ==
          6.0);
}

TEST_CASE("exact hypervolume matches the grid oracle") {
    RngStream r(202, 0);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 2 + t % 2;
        const auto pts = random_points(r, 1 + r.uniform_index(15), m, 0.0, 1.0);
        const std::vector<double> ref(m, 0.9);
        const double expected = oracle::grid_hypervolume(pts, ref);
        REQUIRE(hypervolume(pts, ref).value == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("2-D hypervolume agrees with a Monte Carlo oracle") {
    RngStream r(303, 0);
    for (int t = 0; t < 10; ++t) {
        const auto pts = random_front(r, 30);
        const std::vector<double> lower{0, 0};
        const std::vector<double> ref{1.2, 1.2};
        const auto mc = oracle::monte_carlo_hypervolume_2d(pts, lower, ref, 200000, 7 + t);
        REQUIRE(std::abs(hypervolume_2d(pts, ref) - mc.value) <= 4 * mc.std_error);
    }
}

TEST_CASE("Monte Carlo hypervolume in four objectives") {
    RngStream r(404, 0);
    for (int t = 0; t < 5; ++t) {
        const auto pts = random_points(r, 6, 4, 0.0, 1.0);
        const std::vector<double> ref(4, 1.0);
        HypervolumeOptions opt;
        opt.mc_samples = 200000;
        opt.seed = t;
        const auto est = hypervolume(pts, ref, opt);
        CHECK(est.std_error > 0.0);
        REQUIRE(std::abs(est.value - oracle::grid_hypervolume(pts, ref)) <= 4 * est.std_error);
        const auto again = hypervolume(pts, ref, opt);
        CHECK(again.value == est.value);
    }
}

TEST_CASE("reference data and the hypervolume indicator") {
    const std::vector<ObjectiveVector> front{{0, 2}, {1, 1}, {2, 0}};
    const ReferenceData ref(front);
    CHECK(ref.nadir() == ObjectiveVector{2, 2});
    CHECK(ref.ideal() == ObjectiveVector{0, 0});
    CHECK(ref.front_hypervolume().value == 1.0);

    const auto empty = hypervolume_indicator(std::vector<ObjectiveVector>{}, ref);
    CHECK(empty.value == 1.0);
    const auto outside = hypervolume_indicator(std::vector<ObjectiveVector>{{3, 3}}, ref);
    CHECK(outside.value == 1.0);
    CHECK(hypervolume_indicator(front, ref).value == 0.0);

    CHECK_THROWS_AS(ReferenceData({{1, 1}, {1, 1}}), DegenerateReferenceError);
    CHECK_THROWS_AS(ReferenceData({{1, 2}, {1, 0}}), DegenerateReferenceError);
}

TEST_CASE("attainment surface examples") {
    const std::vector<std::vector<ObjectiveVector>> twice{{{1, 3}, {2, 2}, {3, 1}},
                                                          {{1, 3}, {2, 2}, {3, 1}}};
    CHECK(attainment_surface_50(twice) == twice[0]);

    const std::vector<std::vector<ObjectiveVector>> crossed{{{1, 3}}, {{3, 1}}};
    CHECK(attainment_surface_50(crossed) == std::vector<ObjectiveVector>{{3, 3}});
    CHECK(attainment_surface(crossed, 1) == std::vector<ObjectiveVector>{{1, 3}, {3, 1}});

    const std::vector<std::vector<ObjectiveVector>> three_d{{{1, 2, 3}}, {{1, 2, 3}}};
    CHECK_THROWS_AS(attainment_surface_50(three_d), UnsupportedDimensionError);
    CHECK_THROWS_AS(attainment_surface(crossed, 3), std::invalid_argument);

    const std::vector<ObjectiveVector> corners{{1, 3}, {3, 1}};
    CHECK(staircase_polyline(corners) == std::vector<ObjectiveVector>{{1, 3}, {3, 3}, {3, 1}});
}

TEST_CASE("attainment surfaces agree with direct attainment counts") {
    RngStream r(505, 0);
    for (int t = 0; t < 40; ++t) {
        const std::size_t R = 2 + r.uniform_index(6);
        std::vector<std::vector<ObjectiveVector>> runs;
        std::vector<double> grid;
        for (std::size_t i = 0; i < R; ++i) {
            auto pts = random_points(r, 1 + r.uniform_index(6), 2, 0.0, 1.0);
            for (auto& p : pts) {
                // coarse values to provoke ties
                p[0] = std::round(p[0] * 8) / 8;
                p[1] = std::round(p[1] * 8) / 8;
                grid.push_back(p[0]);
                grid.push_back(p[1]);
            }
            runs.push_back(pts);
        }
        grid.push_back(2.0);
        const std::size_t level = 1 + r.uniform_index(R);
        const auto surface = attainment_surface(runs, level);
        for (std::size_t i = 1; i < surface.size(); ++i) {
            REQUIRE(surface[i][0] > surface[i - 1][0]);
            REQUIRE(surface[i][1] < surface[i - 1][1]);
        }
        for (double x : grid) {
            for (double y : grid) {
                std::size_t count = 0;
                for (const auto& run : runs) {
                    bool hit = false;
                    for (const auto& p : run) {
                        hit = hit || (p[0] <= x && p[1] <= y);
                    }
                    count += hit;
                }
                bool by_surface = false;
                for (const auto& c : surface) {
                    by_surface = by_surface || (c[0] <= x && c[1] <= y);
                }
                REQUIRE(by_surface == (count >= level));
            }
        }
    }
}

TEST_CASE("Mann-Whitney exact cases") {
    const std::vector<double> a{1, 2};
    const std::vector<double> b{3, 4};
    const auto res = mann_whitney(a, b);
    CHECK(res.exact);
    CHECK(res.p == 1.0 / 6.0);
    CHECK(res.u == 0.0);
    CHECK(mann_whitney(b, a).p == 1.0);
    CHECK(mann_whitney(a, a).p >= 0.5);
    const std::vector<double> flat{3, 3, 3};
    CHECK(mann_whitney(flat, flat).p == 0.5);
    CHECK_THROWS_AS(mann_whitney(std::vector<double>{1}, b), DimensionError);
}

TEST_CASE("Mann-Whitney matches enumeration on small samples") {
    RngStream r(606, 0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t na = 2 + r.uniform_index(5);
        const std::size_t nb = 2 + r.uniform_index(5);
        std::vector<double> a(na), b(nb);
        for (auto& v : a) {
            v = static_cast<double>(r.uniform_index(6));
        }
        for (auto& v : b) {
            v = static_cast<double>(r.uniform_index(6)) + 0.5 * static_cast<double>(t % 3);
        }
        const auto res = mann_whitney(a, b);
        REQUIRE(res.exact);
        bool all_same = true;
        for (double v : b) {
            all_same = all_same && v == a[0];
        }
        for (double v : a) {
            all_same = all_same && v == a[0];
        }
        if (!all_same) {
            REQUIRE(res.p == doctest::Approx(oracle::mann_whitney_enumerated(a, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Mann-Whitney normal approximation") {
    std::vector<double> lo, hi;
    for (int i = 0; i < 20; ++i) {
        lo.push_back(i);
        hi.push_back(i + 15);
    }
    const auto res = mann_whitney(lo, hi);
    CHECK_FALSE(res.exact);
    CHECK(res.p < 1e-4);
    CHECK(mann_whitney(hi, lo).p > 0.999);
}

TEST_CASE("summary flags") {
    const std::vector<NamedSample> one{{"A", {1.0, 2.0}}};
    const auto s1 = summarize(one);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].best);
    CHECK(s1[0].mean == 1.5);

    // mean 0.20 sd 0.03 vs mean 0.18 sd 0.09, built as +-sd around the mean
    const std::vector<NamedSample> close{{"SAN", {0.17, 0.23}}, {"SAGDE", {0.09, 0.27}},
                                         {"GDE3", {1.53, 1.53}}};
    const auto s2 = summarize(close);
    CHECK(s2[0].sd == doctest::Approx(0.03 * std::sqrt(2.0)));
    CHECK(s2[0].best);
    CHECK(s2[1].best);
    CHECK_FALSE(s2[2].best);
}
