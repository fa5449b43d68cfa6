#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gsf/errors.hpp"
#include "gsf/experiment.hpp"

using namespace gsf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("gsf_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentPlan small_plan(const fs::path& out) {
    ExperimentPlan plan;
    plan.problems = {{1, 2, 4, 20}};
    plan.algorithms = {{"SAN", "SAN", {}}, {"GDE3", "GDE3", {}}};
    plan.profile = Profile::custom;
    plan.runs = 10;
    plan.generations = 20;
    plan.reference_size = 500;
    plan.output_dir = out;
    return plan;
}

std::size_t count_named(const fs::path& dir, const std::string& prefix) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        n += e.is_regular_file() && e.path().filename().string().rfind(prefix, 0) == 0;
    }
    return n;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(GSF_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("profiles") {
    ExperimentPlan plan;
    plan.profile = Profile::paper;
    plan.apply_profile();
    CHECK(plan.runs == 30);
    CHECK(plan.generations == 25000);
    CHECK(plan.total_size == 100);
    plan.profile = Profile::desk;
    plan.apply_profile();
    CHECK(plan.runs == 10);
    CHECK(plan.generations == 2000);
    CHECK(parse_profile("paper") == Profile::paper);
    CHECK_THROWS_AS(parse_profile("huge"), ConfigError);
}

TEST_CASE("plans round-trip through text") {
    auto plan = small_plan("out/dir");
    plan.problems.push_back({4, 3, 4, 20});
    plan.algorithms[0].params.novelty.n_min0 = 0.015625;
    plan.algorithms[0].params.CR = 0.3;
    plan.algorithms[1].params.knn_k = 5;
    plan.seed = 77;
    const auto text = serialize_plan(plan);
    CHECK(parse_plan(text) == plan);
    CHECK(serialize_plan(parse_plan(text)) == text);
}

TEST_CASE("plan errors") {
    CHECK_THROWS_AS(parse_plan("[experiment]\nruns = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_plan("[problem]\nname = WFG1\n[algorithm A]\npreset = NSGA2\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_plan("[problem]\nname = WFG12\n[algorithm A]\npreset = SAN\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_plan("[problem]\nname = WFG1\n[algorithm A]\n[algorithm A]\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_plan("[problem]\nname = WFG2\nl = 21\n[algorithm GDE3]\n").validate(), ConfigError);
    CHECK_THROWS_AS(load_plan("/nonexistent/plan.txt"), IoError);

    auto plan = small_plan("x");
    plan.profile = Profile::paper;
    CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("run identities depend on names only") {
    const wfg::Instance a{1, 2, 4, 20};
    CHECK(problem_key(a) == "WFG1_M2");
    CHECK(run_stream_id("SAN", a, 0) == run_stream_id("SAN", a, 0));
    CHECK(run_stream_id("SAN", a, 0) != run_stream_id("SAN", a, 1));
    CHECK(run_stream_id("SAN", a, 0) != run_stream_id("GDE3", a, 0));
}

TEST_CASE("result tree layout and reruns from the manifest") {
    const auto out = scratch("tree");
    const auto plan = small_plan(out);
    const auto res = run_experiment(plan);
    CHECK(res.runs.size() == 20);
    CHECK(res.select("SAN", plan.problems[0]).size() == 10);

    const auto dir = out / "WFG1_M2";
    CHECK(count_named(out, "run_") == 20);
    CHECK(fs::exists(dir / "summary.txt"));
    CHECK(fs::exists(dir / "mann_whitney.txt"));
    CHECK(fs::exists(dir / "attainment.txt"));
    CHECK(fs::exists(dir / "reference_front.txt"));
    CHECK(fs::exists(out / "manifest.txt"));

    std::size_t rows = 0;
    std::istringstream summary(slurp(dir / "summary.txt"));
    std::string line;
    while (std::getline(summary, line)) {
        rows += !line.empty() && line[0] != '#';
    }
    CHECK(rows == 2);

    // same directory twice is refused
    CHECK_THROWS_AS(run_experiment(plan), IoError);

    auto again = load_plan(out / "manifest.txt");
    CHECK(again.seed == plan.seed);
    const auto out2 = scratch("tree_rerun");
    again.output_dir = out2;
    RunOptions opts;
    opts.workers = 3;
    run_experiment(again, opts);
    for (const auto& e : fs::recursive_directory_iterator(out)) {
        if (e.is_regular_file() && e.path().filename().string().rfind("run_", 0) == 0) {
            const auto twin = out2 / fs::relative(e.path(), out);
            REQUIRE(slurp(e.path()) == slurp(twin));
        }
    }

    const auto set = read_solution_set(dir / "SAN" / "run_0.txt");
    CHECK(set.problem == "WFG1");
    CHECK(set.M == 2);
    CHECK(set.n == 24);
    CHECK(set.f.size() == res.select("SAN", plan.problems[0])[0]->final_set.size());
    fs::remove_all(out);
    fs::remove_all(out2);
}

TEST_CASE("command line exit codes") {
    const auto out = scratch("cli");
    fs::create_directories(out);
    CHECK(cli("") == 2);
    CHECK(cli("bogus") == 2);
    CHECK(cli("run /nonexistent/plan.txt") == 3);

    {
        std::ofstream bad(out / "bad.txt");
        bad << "[problem]\nname = WFG1\n[algorithm A]\npreset = NSGA2\n";
    }
    CHECK(cli("run " + (out / "bad.txt").string()) == 2);

    const auto front = (out / "front.txt").string();
    CHECK(cli("front WFG4 200 --out " + front) == 0);
    CHECK(cli("front WFG4 10 -M 3 -k 3") == 2);
    CHECK(cli("indicators " + front + " " + front) == 0);
    CHECK(cli("indicators " + front + " /nonexistent") == 3);
    {
        std::ofstream plan(out / "plan.txt");
        plan << "[experiment]\nprofile = custom\nruns = 2\ngenerations = 3\n"
                "reference_size = 100\noutput = "
             << (out / "res").string() << "\n[problem]\nname = WFG4\n[algorithm GDE3]\n";
    }
    CHECK(cli("run " + (out / "plan.txt").string()) == 0);
    CHECK(cli("compare " + (out / "res").string()) == 0);
    CHECK(cli("forces " + (out / "res").string()) == 0);
    CHECK(cli("compare " + out.string() + "/empty_nothing") == 3);
    fs::remove_all(out);
}
