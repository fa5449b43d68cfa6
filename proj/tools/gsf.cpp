// Command-line front end: run experiments and inspect their outputs.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gsf/assess.hpp"
#include "gsf/errors.hpp"
#include "gsf/experiment.hpp"
#include "gsf/wfg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kConfigExit = 2;
constexpr int kIoExit = 3;

std::vector<double> read_column(const fs::path& path, std::size_t column) {
    std::ifstream in(path);
    if (!in) {
        throw gsf::IoError("cannot read '" + path.string() + "'");
    }
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        double v = 0.0;
        for (std::size_t c = 0; c <= column; ++c) {
            row >> v;
        }
        if (!row.fail()) {
            out.push_back(v);
        }
    }
    return out;
}

int cmd_run(const std::string& plan_file, std::optional<std::uint64_t> seed,
            std::optional<std::string> profile, std::optional<std::string> out,
            std::size_t workers) {
    auto plan = gsf::load_plan(plan_file);
    if (profile) {
        plan.profile = gsf::parse_profile(*profile);
        plan.apply_profile();
    }
    if (seed) {
        plan.seed = *seed;
    }
    if (out) {
        plan.output_dir = *out;
    }
    gsf::RunOptions opts;
    opts.workers = workers;
    opts.log = &std::cerr;
    gsf::run_experiment(plan, opts);
    std::cout << "results written to " << plan.output_dir.string() << '\n';
    return 0;
}

// Pools every <problem>/<algorithm>/indicators.txt found under the given
// directories and prints summaries plus pairwise tests per problem.
int cmd_compare(const std::vector<std::string>& dirs) {
    std::map<std::string, std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>>
        data;
    for (const auto& d : dirs) {
        if (!fs::is_directory(d)) {
            throw gsf::IoError("'" + d + "' is not a directory");
        }
        for (const auto& prob : fs::directory_iterator(d)) {
            if (!prob.is_directory()) {
                continue;
            }
            for (const auto& alg : fs::directory_iterator(prob.path())) {
                const auto file = alg.path() / "indicators.txt";
                if (!fs::exists(file)) {
                    continue;
                }
                auto& slot = data[prob.path().filename().string()][alg.path().filename().string()];
                for (double v : read_column(file, 1)) {
                    slot.first.push_back(v);
                }
                for (double v : read_column(file, 2)) {
                    slot.second.push_back(v);
                }
            }
        }
    }
    if (data.empty()) {
        throw gsf::IoError("no indicator files found");
    }
    std::cout << std::setprecision(6);
    for (const auto& [problem, algs] : data) {
        std::cout << "== " << problem << '\n';
        std::vector<gsf::NamedSample> eps;
        std::vector<gsf::NamedSample> hv;
        for (const auto& [name, vals] : algs) {
            eps.push_back({name, vals.first});
            hv.push_back({name, vals.second});
        }
        const auto se = gsf::summarize(eps);
        const auto sh = gsf::summarize(hv);
        std::cout << "algorithm runs eps_mean eps_sd best hv_mean hv_sd best\n";
        for (std::size_t a = 0; a < se.size(); ++a) {
            std::cout << se[a].name << ' ' << se[a].n << ' ' << se[a].mean << ' ' << se[a].sd
                      << ' ' << (se[a].best ? '*' : '-') << ' ' << sh[a].mean << ' ' << sh[a].sd
                      << ' ' << (sh[a].best ? '*' : '-') << '\n';
        }
        std::cout << "a b p_eps p_hv\n";
        for (std::size_t a = 0; a < eps.size(); ++a) {
            for (std::size_t b = 0; b < eps.size(); ++b) {
                if (a == b || eps[a].values.size() < 2 || eps[b].values.size() < 2) {
                    continue;
                }
                std::cout << eps[a].name << ' ' << eps[b].name << ' '
                          << gsf::mann_whitney(eps[a].values, eps[b].values).p << ' '
                          << gsf::mann_whitney(hv[a].values, hv[b].values).p << '\n';
            }
        }
    }
    return 0;
}

int cmd_indicators(const std::string& set_file, const std::string& front_file,
                   std::uint64_t seed) {
    const auto set = gsf::read_solution_set(set_file);
    const auto front = gsf::read_solution_set(front_file);
    const gsf::ReferenceData ref(front.f);
    const auto hv = gsf::hypervolume_indicator(set.f, ref, seed);
    std::cout << std::setprecision(17) << "epsilon " << gsf::epsilon_indicator(set.f, front.f)
              << "\nhv_difference " << hv.value << "\nhv_std_error " << hv.std_error << '\n';
    return 0;
}

int cmd_front(const std::string& problem, std::size_t count, std::size_t M,
              std::optional<std::size_t> k, std::size_t l, std::uint64_t seed,
              std::optional<std::string> out) {
    gsf::wfg::Instance inst{gsf::wfg::parse_problem_name(problem), M,
                            k.value_or(M >= 2 && 4 % (M - 1) == 0 ? 4 : 2 * (M - 1)), l};
    try {
        inst.validate();
    } catch (const gsf::DimensionError& e) {
        throw gsf::ConfigError(e.what());
    }
    gsf::RngStream rng(seed, 0);
    const auto pts = gsf::wfg::front_samples(inst, count, rng);
    std::ostringstream os;
    os << "# reference WFG" << inst.problem << " M " << M << '\n';
    gsf::write_points(os, pts);
    if (out) {
        std::ofstream f(*out);
        if (!f || !(f << os.str())) {
            throw gsf::IoError("cannot write '" + *out + "'");
        }
    } else {
        std::cout << os.str();
    }
    return 0;
}

int cmd_forces(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw gsf::IoError("'" + dir + "' is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().filename() == "forces.txt") {
            files.push_back(e.path());
        }
    }
    if (files.empty()) {
        throw gsf::IoError("no aggregated force histograms under '" + dir + "'");
    }
    std::sort(files.begin(), files.end());
    std::cout << std::fixed << std::setprecision(2);
    for (const auto& f : files) {
        const auto h = gsf::read_force_histogram(f);
        const auto rel = fs::relative(f.parent_path(), dir);
        std::cout << "== " << rel.generic_string() << '\n';
        h.write(std::cout);
        const auto rep = gsf::exclusion_report(h);
        std::cout << "unfeasible " << rep.unfeasible_percent << "% zero_modulus "
                  << rep.zero_modulus_percent << "%\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"General Subpopulation Framework experiments"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::string> profile;
    std::optional<std::string> out;
    std::size_t workers = 1;

    auto* run = app.add_subcommand("run", "Run an experiment plan (or a manifest)");
    std::string plan_file;
    run->add_option("plan", plan_file, "Plan or manifest file")->required();
    run->add_option("--seed", seed, "Override the base seed");
    run->add_option("--profile", profile, "paper or desk")->check(CLI::IsMember({"paper", "desk"}));
    run->add_option("--out", out, "Output directory");
    run->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "Summaries and Mann-Whitney tables");
    std::vector<std::string> dirs;
    compare->add_option("dirs", dirs, "Result directories")->required();

    auto* indicators = app.add_subcommand("indicators", "Indicators of one solution set");
    std::string set_file;
    std::string front_file;
    std::uint64_t ind_seed = 0;
    indicators->add_option("set", set_file, "Solution set file")->required();
    indicators->add_option("front", front_file, "Reference front file")->required();
    indicators->add_option("--seed", ind_seed, "Monte Carlo seed (M >= 4)");

    auto* front = app.add_subcommand("front", "Sample a WFG optimal front");
    std::string problem;
    std::size_t count = 0;
    std::size_t M = 2;
    std::optional<std::size_t> k;
    std::size_t l = 20;
    std::uint64_t front_seed = 1;
    front->add_option("problem", problem, "WFG1..WFG9")->required();
    front->add_option("count", count, "Number of samples")->required()->check(CLI::PositiveNumber);
    front->add_option("-M,--objectives", M, "Number of objectives");
    front->add_option("-k,--position", k, "Position parameters");
    front->add_option("-l,--distance", l, "Distance parameters");
    front->add_option("--seed", front_seed, "Sampling seed");
    front->add_option("--out", out, "Write to a file instead of stdout");

    auto* forces = app.add_subcommand("forces", "Force histograms of a result directory");
    std::string forces_dir;
    forces->add_option("dir", forces_dir, "Result directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    try {
        if (*run) {
            return cmd_run(plan_file, seed, profile, out, workers);
        }
        if (*compare) {
            return cmd_compare(dirs);
        }
        if (*indicators) {
            return cmd_indicators(set_file, front_file, ind_seed);
        }
        if (*front) {
            return cmd_front(problem, count, M, k, l, front_seed, out);
        }
        if (*forces) {
            return cmd_forces(forces_dir);
        }
    } catch (const gsf::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoExit;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoExit;
    } catch (const std::exception& e) {
        // Everything else stems from the inputs: bad plans, names, or files.
        std::cerr << "error: " << e.what() << '\n';
        return kConfigExit;
    }
    return kConfigExit;
}
