#include "gsf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gsf/assess.hpp"
#include "gsf/errors.hpp"

namespace gsf {

namespace fs = std::filesystem;

std::string_view to_string(Profile p) {
    switch (p) {
        case Profile::paper: return "paper";
        case Profile::desk: return "desk";
        case Profile::custom: return "custom";
    }
    return "custom";
}

Profile parse_profile(std::string_view s) {
    if (s == "paper") {
        return Profile::paper;
    }
    if (s == "desk") {
        return Profile::desk;
    }
    if (s == "custom") {
        return Profile::custom;
    }
    throw ConfigError("unknown profile '" + std::string(s) + "' (paper, desk or custom)");
}

namespace {

struct ProfileValues {
    std::size_t runs, generations, total_size;
};

std::optional<ProfileValues> profile_values(Profile p) {
    switch (p) {
        case Profile::paper: return ProfileValues{30, 25000, 100};
        case Profile::desk: return ProfileValues{10, 2000, 100};
        case Profile::custom: break;
    }
    return std::nullopt;
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::string im_name(std::string_view preset_name) {
    const auto p = upper(preset_name);
    if (p == "SAN" || p == "SAGDE") {
        return "uniform";
    }
    if (p == "DE_PER_OBJECTIVE") {
        return "identity";
    }
    return "none";
}

std::size_t default_k(std::size_t M) {
    return M >= 2 && 4 % (M - 1) == 0 ? 4 : 2 * (M > 1 ? M - 1 : 1);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        if (!out.flush()) {
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir.string() + "'");
    }
}

}  // namespace

void ExperimentPlan::apply_profile() {
    if (const auto v = profile_values(profile)) {
        runs = v->runs;
        generations = v->generations;
        total_size = v->total_size;
    }
}

void ExperimentPlan::validate() const {
    if (problems.empty()) {
        throw ConfigError("experiment has no problems");
    }
    if (algorithms.empty()) {
        throw ConfigError("experiment has no algorithms");
    }
    if (runs == 0 || generations == 0) {
        throw ConfigError("runs and generations must be at least 1");
    }
    if (reference_size == 0) {
        throw ConfigError("reference_size must be at least 1");
    }
    if (profile == Profile::paper) {
        const auto v = *profile_values(profile);
        if (runs != v.runs || generations != v.generations || total_size != v.total_size) {
            throw ConfigError("the paper profile fixes runs=30, generations=25000, total_size=100");
        }
    }
    std::set<std::string> labels;
    for (const auto& a : algorithms) {
        if (a.label.empty() || !std::all_of(a.label.begin(), a.label.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '_' || c == '-' || c == '.';
            })) {
            throw ConfigError("algorithm label '" + a.label +
                              "' must be non-empty and use only [A-Za-z0-9_.-]");
        }
        if (!labels.insert(a.label).second) {
            throw ConfigError("duplicate algorithm label '" + a.label + "'");
        }
    }
    std::set<std::string> keys;
    for (const auto& inst : problems) {
        try {
            inst.validate();
        } catch (const DimensionError& e) {
            throw ConfigError(e.what());
        }
        if (!keys.insert(problem_key(inst)).second) {
            throw ConfigError("problem " + problem_key(inst) + " listed twice");
        }
        auto spec = std::make_shared<const ProblemSpec>(wfg::make_problem(inst));
        for (const auto& a : algorithms) {
            try {
                auto params = a.params;
                params.total_size = total_size;
                auto cfg = preset(a.preset, inst.M, params);
                cfg.problem = spec;
                cfg.generations = generations;
                cfg.validate();
            } catch (const DimensionError& e) {
                throw ConfigError(a.label + " on " + problem_key(inst) + ": " + e.what());
            }
        }
    }
}

std::string serialize_plan(const ExperimentPlan& plan) {
    std::ostringstream os;
    os << "[experiment]\n"
       << "profile = " << to_string(plan.profile) << '\n'
       << "runs = " << plan.runs << '\n'
       << "generations = " << plan.generations << '\n'
       << "total_size = " << plan.total_size << '\n'
       << "seed = " << plan.seed << '\n'
       << "output = " << plan.output_dir.generic_string() << '\n'
       << "reference_size = " << plan.reference_size << '\n'
       << "record_forces = " << (plan.record_forces ? "true" : "false") << '\n'
       << "offer_all_candidates = " << (plan.offer_all_candidates ? "true" : "false") << '\n';
    for (const auto& p : plan.problems) {
        os << "\n[problem]\nname = WFG" << p.problem << "\nM = " << p.M << "\nk = " << p.k
           << "\nl = " << p.l << '\n';
    }
    for (const auto& a : plan.algorithms) {
        const auto& pp = a.params;
        const auto& nv = pp.novelty;
        os << "\n[algorithm " << a.label << "]\npreset = " << a.preset << '\n';
        if (pp.CR) {
            os << "CR = " << fmt(*pp.CR) << '\n';
        }
        if (pp.F) {
            os << "F = " << fmt(*pp.F) << '\n';
        }
        if (pp.S) {
            os << "S =";
            for (double r : *pp.S) {
                os << ' ' << fmt(r);
            }
            os << '\n';
        }
        os << "IM = " << im_name(a.preset) << '\n';
        os << "k = " << nv.k << '\n';
        if (nv.n_min0) {
            os << "n_min0 = " << fmt(*nv.n_min0) << '\n';
        }
        os << "n_inc = " << fmt(nv.n_inc) << "\nn_dec = " << fmt(nv.n_dec) << "\nn_a = " << nv.n_a
           << "\nn_r = " << nv.n_r << '\n';
        if (nv.max_entries) {
            os << "max_archive = " << *nv.max_entries << '\n';
        }
        if (pp.knn_k != 0) {
            os << "knn_k = " << pp.knn_k << '\n';
        }
        if (pp.total_size != PresetParams{}.total_size) {
            os << "total_size = " << pp.total_size << '\n';
        }
    }
    return os.str();
}

ExperimentPlan parse_plan(std::string_view text) {
    ExperimentPlan plan;
    std::set<std::string> explicit_keys;

    enum class Section { none, experiment, problem, algorithm };
    Section section = Section::none;

    // Problem sections may name several problems; they are expanded when the
    // section ends so M/k/l may follow the name.
    struct PendingProblem {
        std::vector<int> ids;
        std::size_t M = 2;
        std::optional<std::size_t> k;
        std::size_t l = 20;
    };
    std::optional<PendingProblem> pending;
    auto flush_problem = [&] {
        if (!pending) {
            return;
        }
        if (pending->ids.empty()) {
            throw ConfigError("[problem] section without a name");
        }
        for (int id : pending->ids) {
            plan.problems.push_back(
                wfg::Instance{id, pending->M, pending->k.value_or(default_k(pending->M)), pending->l});
        }
        pending.reset();
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            }
            flush_problem();
            const auto head = words(line.substr(1, line.size() - 2));
            if (head.size() == 1 && head[0] == "experiment") {
                section = Section::experiment;
            } else if (head.size() == 1 && head[0] == "problem") {
                section = Section::problem;
                pending.emplace();
            } else if (head.size() == 2 && head[0] == "algorithm") {
                section = Section::algorithm;
                AlgorithmSpec a;
                a.label = head[1];
                a.preset = head[1];
                plan.algorithms.push_back(std::move(a));
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section " + line);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto unknown = [&] {
            return ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        };
        switch (section) {
            case Section::none:
                throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
            case Section::experiment:
                explicit_keys.insert(key);
                if (key == "runs") {
                    plan.runs = to_u64(key, value);
                } else if (key == "generations") {
                    plan.generations = to_u64(key, value);
                } else if (key == "total_size") {
                    plan.total_size = to_u64(key, value);
                } else if (key == "seed") {
                    plan.seed = to_u64(key, value);
                } else if (key == "profile") {
                    plan.profile = parse_profile(value);
                } else if (key == "output") {
                    plan.output_dir = value;
                } else if (key == "reference_size") {
                    plan.reference_size = to_u64(key, value);
                } else if (key == "record_forces") {
                    plan.record_forces = to_bool(key, value);
                } else if (key == "offer_all_candidates") {
                    plan.offer_all_candidates = to_bool(key, value);
                } else {
                    throw unknown();
                }
                break;
            case Section::problem:
                if (key == "name") {
                    for (const auto& w : words(value)) {
                        pending->ids.push_back(wfg::parse_problem_name(w));
                    }
                } else if (key == "M") {
                    pending->M = to_u64(key, value);
                } else if (key == "k") {
                    pending->k = to_u64(key, value);
                } else if (key == "l") {
                    pending->l = to_u64(key, value);
                } else {
                    throw unknown();
                }
                break;
            case Section::algorithm: {
                auto& a = plan.algorithms.back();
                auto& pp = a.params;
                if (key == "preset") {
                    a.preset = value;
                } else if (key == "CR") {
                    pp.CR = to_double(key, value);
                } else if (key == "F") {
                    pp.F = to_double(key, value);
                } else if (key == "S") {
                    std::vector<double> r;
                    for (const auto& w : words(value)) {
                        r.push_back(to_double(key, w));
                    }
                    pp.S = std::move(r);
                } else if (key == "IM") {
                    if (value != im_name(a.preset)) {
                        throw ConfigError("line " + std::to_string(line_no) + ": preset " +
                                          a.preset + " uses IM = " + im_name(a.preset));
                    }
                } else if (key == "k") {
                    pp.novelty.k = to_u64(key, value);
                } else if (key == "n_min0") {
                    pp.novelty.n_min0 = to_double(key, value);
                } else if (key == "n_inc") {
                    pp.novelty.n_inc = to_double(key, value);
                } else if (key == "n_dec") {
                    pp.novelty.n_dec = to_double(key, value);
                } else if (key == "n_a") {
                    pp.novelty.n_a = to_u64(key, value);
                } else if (key == "n_r") {
                    pp.novelty.n_r = to_u64(key, value);
                } else if (key == "max_archive") {
                    pp.novelty.max_entries = to_u64(key, value);
                } else if (key == "knn_k") {
                    pp.knn_k = to_u64(key, value);
                } else if (key == "total_size") {
                    pp.total_size = to_u64(key, value);
                } else {
                    throw unknown();
                }
                break;
            }
        }
    }
    flush_problem();

    if (const auto v = profile_values(plan.profile)) {
        if (!explicit_keys.contains("runs")) {
            plan.runs = v->runs;
        }
        if (!explicit_keys.contains("generations")) {
            plan.generations = v->generations;
        }
        if (!explicit_keys.contains("total_size")) {
            plan.total_size = v->total_size;
        }
    }
    return plan;
}

ExperimentPlan load_plan(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read plan '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan(buf.str());
}

std::string problem_key(const wfg::Instance& inst) {
    return "WFG" + std::to_string(inst.problem) + "_M" + std::to_string(inst.M);
}

std::uint64_t run_stream_id(std::string_view algorithm, const wfg::Instance& inst,
                            std::size_t run) {
    std::ostringstream key;
    key << algorithm << '/' << problem_key(inst) << "/k" << inst.k << "/l" << inst.l << '/' << run;
    return fnv1a(key.str());
}

std::vector<ObjectiveVector> reference_front(const ExperimentPlan& plan,
                                             const wfg::Instance& inst) {
    RngStream rng(plan.seed, fnv1a("reference/" + problem_key(inst)));
    return wfg::front_samples(inst, plan.reference_size, rng);
}

std::vector<const RunRecord*> ExperimentResult::select(std::string_view algorithm,
                                                       const wfg::Instance& problem) const {
    std::vector<const RunRecord*> out;
    for (const auto& r : runs) {
        if (r.algorithm == algorithm && r.problem == problem) {
            out.push_back(&r);
        }
    }
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->run < b->run; });
    return out;
}

void write_solution_set(std::ostream& os, const std::string& problem, std::size_t M,
                        std::size_t n, const std::string& seed, std::span<const Solution> set) {
    os << "# problem " << problem << " M " << M << " n " << n << " seed " << seed << '\n';
    os << std::setprecision(17);
    for (const auto& s : set) {
        bool first = true;
        for (double v : s.x()) {
            os << (first ? "" : " ") << v;
            first = false;
        }
        for (double v : s.f()) {
            os << (first ? "" : " ") << v;
            first = false;
        }
        os << '\n';
    }
}

void write_points(std::ostream& os, std::span<const ObjectiveVector> pts) {
    os << std::setprecision(17);
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            os << (i ? " " : "") << p[i];
        }
        os << '\n';
    }
}

SolutionSetFile read_solution_set(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    SolutionSetFile out;
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            const auto w = words(t.substr(1));
            for (std::size_t i = 0; i + 1 < w.size(); ++i) {
                if (w[i] == "problem" || w[i] == "reference") {
                    out.problem = w[i + 1];
                } else if (w[i] == "M") {
                    out.M = to_u64("M", w[i + 1]);
                } else if (w[i] == "n") {
                    out.n = to_u64("n", w[i + 1]);
                } else if (w[i] == "seed") {
                    out.seed = w[i + 1];
                }
            }
            continue;
        }
        std::vector<double> vals;
        for (const auto& w : words(t)) {
            vals.push_back(to_double("value", w));
        }
        if (width == 0) {
            width = vals.size();
            if (out.M == 0) {
                out.M = width - out.n;
            }
            if (out.n + out.M != width) {
                throw DimensionError("'" + path.string() + "': rows have " + std::to_string(width) +
                                     " columns, header promises n+M = " +
                                     std::to_string(out.n + out.M));
            }
        } else if (vals.size() != width) {
            throw DimensionError("'" + path.string() + "': ragged rows");
        }
        out.x.emplace_back(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(out.n));
        out.f.emplace_back(vals.begin() + static_cast<std::ptrdiff_t>(out.n), vals.end());
    }
    return out;
}

ForceHistogram read_force_histogram(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    std::array<std::size_t, ForceHistogram::kBins> bins{};
    std::size_t unfeasible = 0;
    std::size_t zero = 0;
    std::size_t row = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto w = words(line);
        if (w.empty()) {
            continue;
        }
        if (w[0] == "#") {
            for (std::size_t i = 1; i + 1 < w.size(); ++i) {
                if (w[i] == "unfeasible") {
                    unfeasible = to_u64("unfeasible", w[i + 1]);
                } else if (w[i] == "zero_modulus") {
                    zero = to_u64("zero_modulus", w[i + 1]);
                }
            }
            continue;
        }
        if (w.size() != 2 || row >= ForceHistogram::kBins) {
            throw DimensionError("'" + path.string() + "' is not a force histogram");
        }
        bins[row++] = to_u64("count", w[1]);
    }
    if (row != ForceHistogram::kBins) {
        throw DimensionError("'" + path.string() + "' has " + std::to_string(row) + " bins");
    }
    return ForceHistogram::from_counts(bins, unfeasible, zero);
}

// ---------------------------------------------------------------- runner

namespace {

struct Job {
    std::size_t algorithm;
    std::size_t problem;
    std::size_t run;
};

std::string indicator_row(const RunRecord& r) {
    std::ostringstream os;
    os << std::setprecision(17) << r.run << ' ' << r.epsilon << ' ' << r.hypervolume << ' '
       << r.hypervolume_se << ' ' << r.evaluations << ' ' << r.final_set.size() << '\n';
    return os.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, const RunOptions& options) {
    plan.validate();
    const fs::path root = plan.output_dir;
    if (options.write_files) {
        if (fs::exists(root / "manifest.txt")) {
            throw IoError("'" + root.string() + "' already holds an experiment");
        }
        make_dirs(root);
    }

    std::vector<std::shared_ptr<const ProblemSpec>> specs;
    std::vector<std::unique_ptr<ReferenceData>> refs;
    for (const auto& inst : plan.problems) {
        specs.push_back(std::make_shared<const ProblemSpec>(wfg::make_problem(inst)));
        HypervolumeOptions hv;
        hv.seed = fnv1a("hypervolume/" + problem_key(inst));
        refs.push_back(std::make_unique<ReferenceData>(reference_front(plan, inst), hv));
    }

    std::vector<Job> jobs;
    for (std::size_t p = 0; p < plan.problems.size(); ++p) {
        for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
            for (std::size_t r = 0; r < plan.runs; ++r) {
                jobs.push_back({a, p, r});
            }
        }
    }

    if (options.write_files) {
        std::ostringstream manifest;
        manifest << "# " << kToolVersion << "\n# rerun with: gsf run <this file> --out <dir>\n";
        for (const auto& j : jobs) {
            const auto& inst = plan.problems[j.problem];
            const auto& label = plan.algorithms[j.algorithm].label;
            manifest << "# run " << label << ' ' << problem_key(inst) << ' ' << j.run
                     << " stream " << run_stream_id(label, inst, j.run) << '\n';
        }
        manifest << serialize_plan(plan);
        for (std::size_t p = 0; p < plan.problems.size(); ++p) {
            const auto dir = root / problem_key(plan.problems[p]);
            make_dirs(dir);
            for (const auto& a : plan.algorithms) {
                make_dirs(dir / a.label);
            }
            std::ostringstream front;
            front << "# reference " << problem_key(plan.problems[p]) << " M "
                  << plan.problems[p].M << '\n';
            write_points(front, refs[p]->front());
            write_file(dir / "reference_front.txt", front.str());
        }
        write_file(root / "manifest.txt", manifest.str());
    }

    ExperimentResult result;
    result.runs.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex log_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            {
                std::lock_guard lock(failure_mutex);
                if (failure) {
                    return;
                }
            }
            try {
                const auto& job = jobs[i];
                const auto& alg = plan.algorithms[job.algorithm];
                const auto& inst = plan.problems[job.problem];
                auto params = alg.params;
                params.total_size = plan.total_size;
                auto cfg = preset(alg.preset, inst.M, params);
                cfg.problem = specs[job.problem];
                cfg.generations = plan.generations;
                cfg.record_forces = plan.record_forces;
                cfg.offer_all_candidates = plan.offer_all_candidates;

                RunRecord rec;
                rec.algorithm = alg.label;
                rec.problem = inst;
                rec.run = job.run;
                rec.stream = run_stream_id(alg.label, inst, job.run);
                auto out = run_gsf(cfg, RngStream(plan.seed, rec.stream));
                rec.evaluations = out.evaluations;
                rec.final_set = std::move(out.final_set);
                rec.forces = std::move(out.forces);
                const auto objs = objectives_of(rec.final_set);
                rec.epsilon = epsilon_indicator(objs, refs[job.problem]->front());
                const auto hv = hypervolume_indicator(objs, *refs[job.problem], rec.stream);
                rec.hypervolume = hv.value;
                rec.hypervolume_se = hv.std_error;

                if (options.write_files) {
                    const auto dir = root / problem_key(inst) / alg.label;
                    std::ostringstream set;
                    write_solution_set(set, "WFG" + std::to_string(inst.problem), inst.M, inst.n(),
                                       std::to_string(plan.seed) + "/" + std::to_string(rec.stream),
                                       rec.final_set);
                    write_file(dir / ("run_" + std::to_string(job.run) + ".txt"), set.str());
                    if (rec.forces) {
                        std::ostringstream fh;
                        rec.forces->write(fh);
                        write_file(dir / ("forces_" + std::to_string(job.run) + ".txt"), fh.str());
                    }
                }
                if (options.log) {
                    std::lock_guard lock(log_mutex);
                    *options.log << '[' << ++done << '/' << jobs.size() << "] " << alg.label << ' '
                                 << problem_key(inst) << " run " << job.run
                                 << ": eps=" << rec.epsilon << " hv=" << rec.hypervolume << '\n'
                                 << std::flush;
                }
                result.runs[i] = std::move(rec);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, jobs.size()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    if (!options.write_files) {
        return result;
    }

    // Single-threaded aggregation per problem.
    for (const auto& inst : plan.problems) {
        const auto dir = root / problem_key(inst);
        std::vector<NamedSample> eps;
        std::vector<NamedSample> hv;
        std::ostringstream attainment;
        attainment << std::setprecision(17);
        for (const auto& alg : plan.algorithms) {
            const auto recs = result.select(alg.label, inst);
            std::string rows = "# run epsilon hv_difference hv_std_error evaluations set_size\n";
            NamedSample e{alg.label, {}};
            NamedSample h{alg.label, {}};
            std::vector<std::vector<ObjectiveVector>> fronts;
            ForceHistogram total;
            bool have_forces = false;
            for (const auto* r : recs) {
                rows += indicator_row(*r);
                e.values.push_back(r->epsilon);
                h.values.push_back(r->hypervolume);
                fronts.push_back(objectives_of(r->final_set));
                if (r->forces) {
                    total.merge(*r->forces);
                    have_forces = true;
                }
            }
            write_file(dir / alg.label / "indicators.txt", rows);
            if (have_forces) {
                std::ostringstream fh;
                total.write(fh);
                write_file(dir / alg.label / "forces.txt", fh.str());
            }
            if (inst.M == 2 && fronts.size() >= 2) {
                attainment << "# " << alg.label << '\n';
                for (const auto& p : staircase_polyline(attainment_surface_50(fronts))) {
                    attainment << p[0] << ' ' << p[1] << '\n';
                }
                attainment << "\n\n";
            }
            eps.push_back(std::move(e));
            hv.push_back(std::move(h));
        }

        std::ostringstream summary;
        summary << std::setprecision(6)
                << "# algorithm runs eps_mean eps_sd eps_best hv_mean hv_sd hv_best\n";
        const auto se = summarize(eps);
        const auto sh = summarize(hv);
        for (std::size_t a = 0; a < se.size(); ++a) {
            summary << se[a].name << ' ' << se[a].n << ' ' << se[a].mean << ' ' << se[a].sd << ' '
                    << (se[a].best ? '*' : '-') << ' ' << sh[a].mean << ' ' << sh[a].sd << ' '
                    << (sh[a].best ? '*' : '-') << '\n';
        }
        write_file(dir / "summary.txt", summary.str());

        if (plan.runs >= 2 && plan.algorithms.size() >= 2) {
            std::ostringstream mw;
            mw << std::setprecision(6) << "# a b p_eps p_hv  (H1: a has smaller values than b)\n";
            for (std::size_t a = 0; a < eps.size(); ++a) {
                for (std::size_t b = 0; b < eps.size(); ++b) {
                    if (a != b) {
                        mw << eps[a].name << ' ' << eps[b].name << ' '
                           << mann_whitney(eps[a].values, eps[b].values).p << ' '
                           << mann_whitney(hv[a].values, hv[b].values).p << '\n';
                    }
                }
            }
            write_file(dir / "mann_whitney.txt", mw.str());
        }
        if (inst.M == 2 && plan.runs >= 2) {
            write_file(dir / "attainment.txt", attainment.str());
        }
    }
    return result;
}

}  // namespace gsf
