#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/forces.hpp"
#include "gsf/framework.hpp"
#include "gsf/wfg.hpp"

namespace gsf {

inline constexpr std::string_view kToolVersion = "gsfopt 0.1.0";

enum class Profile { paper, desk, custom };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view s);

struct AlgorithmSpec {
    std::string label;   ///< unique name used in paths and tables
    std::string preset;  ///< SAN, SAGDE, GDE3, MONA, DE_per_objective
    PresetParams params;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

struct ExperimentPlan {
    std::vector<wfg::Instance> problems;
    std::vector<AlgorithmSpec> algorithms;
    std::size_t runs = 10;
    std::size_t generations = 2000;
    std::size_t total_size = 100;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 1;
    Profile profile = Profile::desk;
    std::size_t reference_size = 10000;
    bool record_forces = true;
    bool offer_all_candidates = true;

    /// Sets runs/generations/total_size to the profile's values (no-op for custom).
    void apply_profile();

    /// ConfigError on anything that would fail later (unknown presets, bad sizes, ...).
    void validate() const;

    friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

/// Sectioned key-value text:
///   [experiment] runs, generations, total_size, seed, profile, output, ...
///   [problem]    name (one or more WFG names), M, k, l
///   [algorithm LABEL] preset, CR, F, S, IM, k, n_min0, n_inc, n_dec, n_a, n_r, knn_k
std::string serialize_plan(const ExperimentPlan& plan);
ExperimentPlan parse_plan(std::string_view text);
ExperimentPlan load_plan(const std::filesystem::path& path);

/// "<problem>_M<m>", e.g. WFG1_M2.
std::string problem_key(const wfg::Instance& inst);

/// Stream id of one run; depends only on names, never on list positions.
std::uint64_t run_stream_id(std::string_view algorithm, const wfg::Instance& inst,
                            std::size_t run);

/// Reference front used for a problem's indicators.
std::vector<ObjectiveVector> reference_front(const ExperimentPlan& plan,
                                             const wfg::Instance& inst);

struct RunRecord {
    std::string algorithm;
    wfg::Instance problem;
    std::size_t run = 0;
    std::uint64_t stream = 0;
    std::size_t evaluations = 0;
    double epsilon = 0.0;
    double hypervolume = 0.0;
    double hypervolume_se = 0.0;
    std::vector<Solution> final_set;
    std::optional<ForceHistogram> forces;
};

struct ExperimentResult {
    std::vector<RunRecord> runs;

    /// Records of one (algorithm, problem) pair in run order.
    [[nodiscard]] std::vector<const RunRecord*> select(std::string_view algorithm,
                                                      const wfg::Instance& problem) const;
};

struct RunOptions {
    std::size_t workers = 1;
    std::ostream* log = nullptr;  ///< progress lines when set
    bool write_files = true;
};

/// Runs every (algorithm, problem, run) job and writes the result tree.
/// Throws ConfigError before any work on an invalid plan and IoError when the
/// output directory cannot be written or already holds an experiment.
ExperimentResult run_experiment(const ExperimentPlan& plan, const RunOptions& options = {});

// ---- file formats shared by the CLI verbs

struct SolutionSetFile {
    std::string problem;
    std::size_t M = 0;
    std::size_t n = 0;
    std::string seed;
    std::vector<DecisionVector> x;
    std::vector<ObjectiveVector> f;
};

void write_solution_set(std::ostream& os, const std::string& problem, std::size_t M,
                        std::size_t n, const std::string& seed, std::span<const Solution> set);

/// Reads a solution set file, or a plain objective-vector file when the
/// header carries no decision dimension.
SolutionSetFile read_solution_set(const std::filesystem::path& path);

void write_points(std::ostream& os, std::span<const ObjectiveVector> pts);

/// Reads a force histogram written by ForceHistogram::write.
ForceHistogram read_force_histogram(const std::filesystem::path& path);

}  // namespace gsf
