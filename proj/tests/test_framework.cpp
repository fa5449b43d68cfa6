#include <doctest.h>

#include <cmath>
#include <memory>

#include "gsf/errors.hpp"
#include "gsf/framework.hpp"
#include "gsf/gde3.hpp"
#include "gsf/wfg.hpp"

using namespace gsf;

namespace {

std::shared_ptr<const ProblemSpec> wfg_problem(int p, std::size_t m = 2) {
    return std::make_shared<const ProblemSpec>(wfg::make_problem({p, m, 4, 20}));
}

bool same_sets(const std::vector<Solution>& a, const std::vector<Solution>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].x() != b[i].x() || a[i].f() != b[i].f()) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("size vectors") {
    CHECK(SizeVector({0.3, 0.3, 0.4}, 100).sizes() == std::vector<std::size_t>{30, 30, 40});
    CHECK(SizeVector({1.0 / 3, 1.0 / 3, 1.0 / 3}, 100).sizes() ==
          std::vector<std::size_t>{34, 33, 33});
    CHECK_THROWS_AS(SizeVector({0.5, 0.6}, 100), ConfigError);
    CHECK_THROWS_AS(SizeVector({0.0, 1.0}, 100), ConfigError);
    CHECK_THROWS_AS(SizeVector({0.5, 0.5}, 1), ConfigError);
    CHECK_THROWS_AS(SizeVector({}, 10), ConfigError);

    RngStream r(12, 0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t s = 1 + r.uniform_index(8);
        std::vector<double> w(s);
        double sum = 0.0;
        for (auto& v : w) {
            v = 0.05 + r.uniform();
            sum += v;
        }
        for (auto& v : w) {
            v /= sum;
        }
        const std::size_t total = s + r.uniform_index(300);
        const auto sizes = SizeVector(w, total).sizes();
        std::size_t got = 0;
        for (std::size_t a = 0; a < s; ++a) {
            REQUIRE(std::abs(static_cast<double>(sizes[a]) - w[a] * total) < 1.0);
            got += sizes[a];
        }
        REQUIRE(got == total);
    }
}

TEST_CASE("interaction matrix builders") {
    const auto u3 = uniform_im(3);
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            CHECK(u3(a, b) == doctest::Approx(1.0 / 3));
        }
    }
    CHECK(uniform_im(1).rows() == std::vector<std::vector<double>>{{1.0}});
    const auto u6 = uniform_im(6);
    for (const auto& row : u6.rows()) {
        double s = 0.0;
        for (double v : row) {
            CHECK(v == doctest::Approx(1.0 / 6));
            s += v;
        }
        CHECK(s == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(uniform_im(0), DimensionError);

    const auto a3 = archive_offer_im(3, 2);
    CHECK(a3.id() == kArchiveOffer);
    for (const auto& row : a3.rows()) {
        CHECK(row == std::vector<double>{0, 0, 1});
    }
    CHECK(archive_offer_im(1, 0).rows() == std::vector<std::vector<double>>{{1.0}});
    const auto a6 = archive_offer_im(6, 5);
    for (std::size_t a = 0; a < 6; ++a) {
        CHECK(a6(a, 5) == 1.0);
    }
    CHECK_THROWS_AS(archive_offer_im(3, 3), IndexError);

    CHECK_THROWS_AS(InteractionMatrix({{0.5, 0.4}, {0.5, 0.5}}), ConfigError);
    CHECK_THROWS_AS(InteractionMatrix({{1.0, 0.0}}), DimensionError);
    CHECK(InteractionMatrix({{0, 0}, {0, 0}}).disabled());
}

TEST_CASE("source sampling") {
    RngStream r(5, 0);
    const auto u = uniform_im(3);
    std::vector<int> counts(3, 0);
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        ++counts[sample_source_subpop(u, 1, r)];
    }
    double chi2 = 0.0;
    for (int c : counts) {
        CHECK(static_cast<double>(c) / n == doctest::Approx(1.0 / 3).epsilon(0.03));
        chi2 += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
    }
    CHECK(chi2 < 13.8);  // 0.999 quantile, 2 degrees of freedom

    const InteractionMatrix fixed({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
    const auto id = identity_im(3);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_source_subpop(fixed, 0, r) == 2);
        CHECK(sample_source_subpop(id, 1, r) == 1);
    }
    CHECK_THROWS_AS(sample_source_subpop(InteractionMatrix({{0, 0}, {0, 0}}), 0, r),
                    DisabledInteractionError);
}

TEST_CASE("topologies") {
    const auto cell = build_topology_im(CellularTopology{3, 3});
    REQUIRE(cell.size() == 9);
    for (const auto& row : cell.rows()) {
        int quarters = 0;
        for (double v : row) {
            quarters += v == 0.25;
            CHECK((v == 0.0 || v == 0.25));
        }
        CHECK(quarters == 4);
    }

    const auto isl = build_topology_im(IslandTopology::full(2));
    CHECK(isl.rows() == std::vector<std::vector<double>>{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(build_topology_im(IslandTopology{{{0.5, 0.5}, {1, 0}}}), ConfigError);

    const auto rm = build_topology_im(RestrictedMatingTopology{{{0}, {1}}, 2.0, {}});
    CHECK(rm.rows() == std::vector<std::vector<double>>{{0, 1}, {1, 0}});
    try {
        (void)build_topology_im(RestrictedMatingTopology{{{0}, {1}, {10}}, 2.0, {}});
        FAIL("expected an isolation error");
    } catch (const IsolationError& e) {
        CHECK(e.point() == 2);
    }
}

TEST_CASE("presets") {
    auto san = preset("SAN", 2);
    CHECK(san.sizes.sizes() == std::vector<std::size_t>{30, 30, 40});
    REQUIRE(san.strategies.size() == 3);
    CHECK(san.strategies[0].kind == StrategyKind::de);
    CHECK(san.strategies[0].de.objective_index == 0);
    CHECK(san.strategies[1].de.objective_index == 1);
    CHECK(san.strategies[2].kind == StrategyKind::mona);
    for (const auto& s : san.strategies) {
        CHECK(s.de.CR == 0.1);
        CHECK(s.de.F == 0.1);
    }
    REQUIRE(find_interaction(san.im, kArchiveOffer) != nullptr);
    CHECK(*find_interaction(san.im, kArchiveOffer) == archive_offer_im(3, 2));

    const auto san5 = preset_ratios("SAN", 5);
    REQUIRE(san5.size() == 6);
    for (int i = 0; i < 5; ++i) {
        CHECK(san5[i] == doctest::Approx(0.1));
    }
    CHECK(san5[5] == doctest::Approx(0.5));

    auto sagde = preset("sagde", 2);
    CHECK(sagde.sizes.sizes() == std::vector<std::size_t>{10, 10, 80});
    CHECK(sagde.strategies[2].kind == StrategyKind::gde3);

    CHECK(preset("GDE3", 2).strategies[0].de.F == 0.5);
    CHECK_THROWS_AS(preset("NSGA2", 2), ConfigError);
    PresetParams bad;
    bad.S = std::vector<double>{0.5, 0.5};
    CHECK_THROWS_AS(preset("SAN", 2, bad), ConfigError);
}

TEST_CASE("configuration validation") {
    auto cfg = preset("SAN", 2);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no problem yet
    cfg.problem = wfg_problem(1);
    cfg.generations = 1;
    CHECK_NOTHROW(cfg.validate());
    auto wrong = cfg;
    wrong.im.push_back(uniform_im(4, 3));
    CHECK_THROWS_AS(wrong.validate(), DimensionError);
    auto three_obj = cfg;
    three_obj.problem = wfg_problem(4, 3);
    CHECK_NOTHROW(three_obj.validate());
    auto few = preset("SAN", 2);
    few.problem = wfg_problem(1);
    few.strategies.pop_back();
    CHECK_THROWS_AS(few.validate(), DimensionError);
}

TEST_CASE("runs are reproducible") {
    auto cfg = preset("SAN", 2);
    cfg.problem = wfg_problem(1);
    cfg.generations = 10;
    const auto a = run_gsf(cfg, RngStream(2024, 1));
    const auto b = run_gsf(cfg, RngStream(2024, 1));
    CHECK(same_sets(a.final_set, b.final_set));
    CHECK(a.evaluations == 100 * 11);
    REQUIRE(a.archives.size() == 1);
    CHECK(a.archives[0].entries().size() == b.archives[0].entries().size());

    const auto c = run_gsf(cfg, RngStream(2025, 1));
    CHECK_FALSE(same_sets(a.final_set, c.final_set));

    const auto objs = objectives_of(a.final_set);
    CHECK(nondominated_filter(objs).size() == objs.size());
    for (const auto& s : a.final_set) {
        CHECK(s.feasible());
    }
}

TEST_CASE("a single GDE3 subpopulation reduces to the standalone algorithm") {
    auto cfg = preset("GDE3", 2);
    cfg.problem = wfg_problem(2);
    cfg.generations = 25;
    const RngStream rng(9, 4);
    const auto framed = run_gsf(cfg, rng);
    const auto alone = run_gde3(*cfg.problem, 100, cfg.strategies[0].de, 0, 25, rng.split(0));
    CHECK(same_sets(framed.subpopulations[0], alone.population));

    cfg.im = {identity_im(1)};
    CHECK(same_sets(run_gsf(cfg, rng).subpopulations[0], alone.population));
}

TEST_CASE("a disabled parent interaction falls back to local sampling") {
    auto cfg = preset("SAGDE", 2);
    cfg.problem = wfg_problem(1);
    cfg.generations = 3;
    cfg.im = {InteractionMatrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})};
    const auto res = run_gsf(cfg, RngStream(1, 1));
    CHECK(res.evaluations == 400);
}

TEST_CASE("evaluation budget guard") {
    auto cfg = preset("GDE3", 2);
    cfg.problem = wfg_problem(1);
    cfg.generations = 10;
    cfg.max_evaluations = 500;
    CHECK_THROWS_AS(run_gsf(cfg, RngStream(1, 1)), BudgetError);
    cfg.max_evaluations = 1100;
    CHECK_NOTHROW(run_gsf(cfg, RngStream(1, 1)));
}

TEST_CASE("interaction schedules replace the matrices per generation") {
    auto cfg = preset("SAGDE", 2);
    cfg.problem = wfg_problem(1);
    cfg.generations = 4;
    std::vector<std::size_t> seen;
    cfg.im_schedule = [&](std::size_t g) {
        seen.push_back(g);
        return InteractionMatrixSet{g % 2 ? uniform_im(3) : identity_im(3)};
    };
    (void)run_gsf(cfg, RngStream(3, 3));
    CHECK(seen.size() == 4);
}

TEST_CASE("recorded forces cover every trial") {
    auto cfg = preset("SAN", 2);
    cfg.problem = wfg_problem(4);
    cfg.generations = 5;
    cfg.record_forces = true;
    const auto res = run_gsf(cfg, RngStream(8, 8));
    REQUIRE(res.forces);
    CHECK(res.forces->total_offered() == 500);
    std::size_t per = 0;
    for (const auto& h : res.subpop_forces) {
        per += h.total_offered();
    }
    CHECK(per == 500);
}
