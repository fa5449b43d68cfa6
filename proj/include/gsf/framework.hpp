#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsf/core.hpp"
#include "gsf/de.hpp"
#include "gsf/forces.hpp"
#include "gsf/novelty.hpp"
#include "gsf/rng.hpp"

namespace gsf {

/// Subpopulation size ratios plus the total population size.
class SizeVector {
public:
    SizeVector() = default;

    /// Ratios must lie in (0,1] and sum to 1 within 1e-9; total >= number of ratios.
    SizeVector(std::vector<double> ratios, std::size_t total);

    [[nodiscard]] const std::vector<double>& ratios() const noexcept { return ratios_; }
    [[nodiscard]] std::size_t total() const noexcept { return total_; }
    [[nodiscard]] std::size_t count() const noexcept { return ratios_.size(); }

    /// Integer sizes by largest-remainder rounding; they sum to total().
    [[nodiscard]] std::vector<std::size_t> sizes() const;

private:
    std::vector<double> ratios_;
    std::size_t total_ = 0;
};

/// Interaction ids used by the runner.
inline constexpr int kParentSelection = 1;
inline constexpr int kArchiveOffer = 2;

/// Square matrix of interaction probabilities p(a -> b). Each row sums to 1,
/// or the whole matrix is zero (interaction disabled).
class InteractionMatrix {
public:
    InteractionMatrix(std::vector<std::vector<double>> rows, int id = kParentSelection);

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] int id() const noexcept { return id_; }
    void set_id(int id) noexcept { id_ = id; }
    [[nodiscard]] double operator()(std::size_t a, std::size_t b) const { return rows_[a][b]; }
    [[nodiscard]] const std::vector<double>& row(std::size_t a) const { return rows_.at(a); }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    [[nodiscard]] bool disabled() const noexcept { return disabled_; }

    friend bool operator==(const InteractionMatrix&, const InteractionMatrix&) = default;

private:
    std::vector<std::vector<double>> rows_;
    int id_ = kParentSelection;
    bool disabled_ = false;
};

using InteractionMatrixSet = std::vector<InteractionMatrix>;

/// Matrix with the given id, or nullptr.
const InteractionMatrix* find_interaction(const InteractionMatrixSet& set, int id);

/// Draws b with probability p(acting -> b). DisabledInteractionError on a zero row.
std::size_t sample_source_subpop(const InteractionMatrix& im, std::size_t acting_subpop,
                                 RngStream& rng);

InteractionMatrix uniform_im(std::size_t s, int id = kParentSelection);
InteractionMatrix identity_im(std::size_t s, int id = kParentSelection);
InteractionMatrix archive_offer_im(std::size_t s, std::size_t archive_col, int id = kArchiveOffer);

/// Migration probabilities between islands; the diagonal must be zero.
struct IslandTopology {
    std::vector<std::vector<double>> migration;

    /// Every island sends uniformly to all others.
    static IslandTopology full(std::size_t s);
};

/// Toroidal width x height grid with von Neumann neighbourhoods.
struct CellularTopology {
    std::size_t width = 1;
    std::size_t height = 1;
};

using Distance = std::function<double(std::span<const double>, std::span<const double>)>;

/// u(a,b) = 1 when dist(a,b) < sigma (a != b), rows normalized.
struct RestrictedMatingTopology {
    std::vector<std::vector<double>> points;
    double sigma = 1.0;
    Distance dist;  // Euclidean when empty
};

using Topology = std::variant<IslandTopology, CellularTopology, RestrictedMatingTopology>;

InteractionMatrix build_topology_im(const Topology& topology);

enum class StrategyKind { de, gde3, mona };

std::string_view to_string(StrategyKind kind);

struct StrategyDescriptor {
    StrategyKind kind = StrategyKind::gde3;
    DeParams de;             // de.objective_index selects the objective of a DE subpopulation
    std::size_t knn_k = 0;   // GDE3 pruning neighbours; 0 means one per objective
    NoveltyParams novelty;   // MONA only
};

struct GsfConfig {
    std::vector<StrategyDescriptor> strategies;
    SizeVector sizes;
    InteractionMatrixSet im;
    std::shared_ptr<const ProblemSpec> problem;
    std::size_t generations = 1;

    /// Abort with BudgetError instead of exceeding this many evaluations.
    std::optional<std::size_t> max_evaluations;
    bool record_forces = false;
    /// Offer DE/GDE3 trials to the archive even when selection discards them.
    bool offer_all_candidates = true;
    /// Optional per-generation replacement of the interaction matrices.
    std::function<InteractionMatrixSet(std::size_t generation)> im_schedule;

    /// Throws ConfigError / DimensionError on inconsistent settings.
    void validate() const;
};

struct GsfRunResult {
    /// Non-dominated feasible solutions over all subpopulations and archives.
    std::vector<Solution> final_set;
    std::vector<std::vector<Solution>> subpopulations;
    std::size_t evaluations = 0;
    /// Present when forces were recorded and the problem is bi-objective.
    std::optional<ForceHistogram> forces;
    std::vector<ForceHistogram> subpop_forces;
    /// One archive per MONA subpopulation, in subpopulation order.
    std::vector<NoveltyArchive> archives;
};

/// Runs config.generations synchronous generations.
GsfRunResult run_gsf(const GsfConfig& config, RngStream rng);

struct PresetParams {
    std::optional<double> CR;
    std::optional<double> F;
    std::optional<std::vector<double>> S;
    NoveltyParams novelty;
    std::size_t total_size = 100;
    std::size_t knn_k = 0;

    friend bool operator==(const PresetParams&, const PresetParams&) = default;
};

/// Named compositions: SAN, SAGDE, GDE3, MONA, DE_per_objective. The returned
/// config still needs a problem and a generation budget.
GsfConfig preset(std::string_view name, std::size_t M, const PresetParams& params = {});

/// Default size ratios of the named preset for M objectives.
std::vector<double> preset_ratios(std::string_view name, std::size_t M);

}  // namespace gsf
