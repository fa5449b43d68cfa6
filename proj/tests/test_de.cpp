#include <doctest.h>

#include <cmath>

#include "gsf/de.hpp"
#include "gsf/errors.hpp"

using namespace gsf;

namespace {

ProblemSpec sphere(std::size_t n) {
    return ProblemSpec("sphere", 1, std::vector<double>(n, -5.0), std::vector<double>(n, 5.0),
                       [](std::span<const double> x) {
                           double s = 0.0;
                           for (double v : x) {
                               s += v * v;
                           }
                           return ObjectiveVector{s};
                       });
}

}  // namespace

TEST_CASE("parameter ranges") {
    CHECK_NOTHROW((DeParams{2.0, 1.0, 0}).validate());
    CHECK_THROWS_AS((DeParams{2.1, 0.5, 0}).validate(), ConfigError);
    CHECK_THROWS_AS((DeParams{0.5, -0.1, 0}).validate(), ConfigError);
}

TEST_CASE("mutation examples") {
    const std::vector<double> r1{1, 1}, r2{3, 2}, r3{1, 0};
    CHECK(mutate(r1, r2, r3, 0.5) == DecisionVector{2, 2});
    CHECK(mutate(r1, r2, r3, 0.0) == r1);
    CHECK(mutate(r1, r2, r2, 1.7) == r1);
    CHECK_THROWS_AS(mutate(r1, r2, std::vector<double>{1}, 0.5), DimensionError);
}

TEST_CASE("crossover extremes") {
    RngStream r(5, 0);
    const std::vector<double> x(24, 0.0);
    const std::vector<double> v(24, 1.0);
    for (int t = 0; t < 1000; ++t) {
        REQUIRE(crossover(x, v, 1.0, r) == v);
        const auto u = crossover(x, v, 0.0, r);
        int from_v = 0;
        for (double c : u) {
            from_v += c == 1.0;
        }
        REQUIRE(from_v == 1);
    }
}

TEST_CASE("crossover component count follows the binomial model") {
    RngStream r(6, 0);
    const std::vector<double> x(24, 0.0);
    const std::vector<double> v(24, 1.0);
    const int trials = 10000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        for (double c : crossover(x, v, 0.5, r)) {
            total += c;
        }
    }
    // forced index plus Binomial(23, 0.5) (the forced draw never lowers the count)
    const double mean = total / trials;
    const double sigma = std::sqrt(23 * 0.25 / trials);
    CHECK(std::abs(mean - (1 + 0.5 * 23)) < 3 * sigma + 0.5);
}

TEST_CASE("single-objective selection") {
    const Solution parent({0.0}, {2.0}, true);
    const Solution better({0.0}, {1.0}, true);
    const Solution equal({1.0}, {2.0}, true);
    const Solution infeasible({9.0}, {0.5}, false, 3.0);
    const Solution less_infeasible({9.0}, {7.0}, false, 1.0);
    CHECK(&de_select(parent, better, 0) == &better);
    CHECK(&de_select(parent, equal, 0) == &parent);
    CHECK(&de_select(parent, infeasible, 0) == &parent);
    CHECK(&de_select(infeasible, parent, 0) == &parent);
    CHECK(&de_select(infeasible, less_infeasible, 0) == &less_infeasible);
    CHECK_THROWS_AS(de_select(parent, Solution(), 0), StateError);
}

TEST_CASE("a zero step keeps every member or replaces it by a better one") {
    const auto p = sphere(4);
    auto pop = run_de(p, 10, {0.5, 0.6, 0}, 0, RngStream(1, 0)).population;
    const auto before = pop;
    RngStream r(2, 0);
    std::vector<Solution> snapshot = pop;
    de_generation_step(pop, {0.0, 0.0, 0}, local_parent_sampler(snapshot), p, r);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop[i].x() != before[i].x()) {
            int changed = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                changed += pop[i].x()[j] != before[i].x()[j];
            }
            CHECK(changed == 1);
            CHECK(pop[i].f()[0] < before[i].f()[0]);
        }
    }
}

TEST_CASE("sphere convergence") {
    const auto p = sphere(10);
    const auto res = run_de(p, 50, {0.5, 0.6, 0}, 1000, RngStream(42, 0));
    CHECK(res.evaluations == 50 * 1001);
    CHECK(best_objective(res.population, 0) < 1e-6);
}

TEST_CASE("de runs are deterministic") {
    const auto p = sphere(5);
    const auto a = run_de(p, 20, {0.5, 0.6, 0}, 30, RngStream(3, 9));
    const auto b = run_de(p, 20, {0.5, 0.6, 0}, 30, RngStream(3, 9));
    for (std::size_t i = 0; i < a.population.size(); ++i) {
        CHECK(a.population[i].x() == b.population[i].x());
    }
}
