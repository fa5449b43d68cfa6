#include "gsf/framework.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "gsf/errors.hpp"
#include "gsf/gde3.hpp"

namespace gsf {

// ---------------------------------------------------------------- sizes

SizeVector::SizeVector(std::vector<double> ratios, std::size_t total)
    : ratios_(std::move(ratios)), total_(total) {
    if (ratios_.empty()) {
        throw ConfigError("size vector needs at least one ratio");
    }
    double sum = 0.0;
    for (double r : ratios_) {
        if (!(r > 0.0 && r <= 1.0)) {
            throw ConfigError("size ratios must lie in (0,1], got " + std::to_string(r));
        }
        sum += r;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw ConfigError("size ratios must sum to 1, got " + std::to_string(sum));
    }
    if (total_ < ratios_.size()) {
        throw ConfigError("total size is smaller than the number of subpopulations");
    }
}

std::vector<std::size_t> SizeVector::sizes() const {
    const std::size_t s = ratios_.size();
    std::vector<std::size_t> out(s);
    std::vector<double> rem(s);
    std::size_t assigned = 0;
    for (std::size_t a = 0; a < s; ++a) {
        const double exact = ratios_[a] * static_cast<double>(total_);
        out[a] = static_cast<std::size_t>(std::floor(exact));
        rem[a] = exact - static_cast<double>(out[a]);
        assigned += out[a];
    }
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return rem[x] > rem[y]; });
    for (std::size_t j = 0; assigned < total_; j = (j + 1) % s) {
        ++out[order[j]];
        ++assigned;
    }
    return out;
}

// ---------------------------------------------------------------- matrices

InteractionMatrix::InteractionMatrix(std::vector<std::vector<double>> rows, int id)
    : rows_(std::move(rows)), id_(id) {
    const std::size_t s = rows_.size();
    if (s == 0) {
        throw DimensionError("interaction matrix must be at least 1x1");
    }
    bool all_zero = true;
    for (const auto& r : rows_) {
        if (r.size() != s) {
            throw DimensionError("interaction matrix must be square");
        }
        for (double p : r) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ConfigError("interaction probabilities must lie in [0,1]");
            }
            all_zero = all_zero && p == 0.0;
        }
    }
    disabled_ = all_zero;
    if (disabled_) {
        return;
    }
    for (std::size_t a = 0; a < s; ++a) {
        const double sum = std::accumulate(rows_[a].begin(), rows_[a].end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw ConfigError("interaction matrix row " + std::to_string(a) +
                              " sums to " + std::to_string(sum));
        }
    }
}

const InteractionMatrix* find_interaction(const InteractionMatrixSet& set, int id) {
    for (const auto& m : set) {
        if (m.id() == id) {
            return &m;
        }
    }
    return nullptr;
}

std::size_t sample_source_subpop(const InteractionMatrix& im, std::size_t acting_subpop,
                                 RngStream& rng) {
    if (acting_subpop >= im.size()) {
        throw IndexError("acting subpopulation out of range");
    }
    const auto& row = im.row(acting_subpop);
    if (im.disabled() || std::all_of(row.begin(), row.end(), [](double p) { return p == 0.0; })) {
        throw DisabledInteractionError("interaction " + std::to_string(im.id()) +
                                       " is disabled for subpopulation " +
                                       std::to_string(acting_subpop));
    }
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t b = 0; b < row.size(); ++b) {
        if (row[b] <= 0.0) {
            continue;
        }
        acc += row[b];
        last = b;
        if (u < acc) {
            return b;
        }
    }
    return last;  // rounding slack at the top of the row
}

InteractionMatrix uniform_im(std::size_t s, int id) {
    if (s == 0) {
        throw DimensionError("uniform interaction matrix needs s >= 1");
    }
    return InteractionMatrix(
        std::vector<std::vector<double>>(s, std::vector<double>(s, 1.0 / static_cast<double>(s))),
        id);
}

InteractionMatrix identity_im(std::size_t s, int id) {
    if (s == 0) {
        throw DimensionError("identity interaction matrix needs s >= 1");
    }
    std::vector<std::vector<double>> rows(s, std::vector<double>(s, 0.0));
    for (std::size_t a = 0; a < s; ++a) {
        rows[a][a] = 1.0;
    }
    return InteractionMatrix(std::move(rows), id);
}

InteractionMatrix archive_offer_im(std::size_t s, std::size_t archive_col, int id) {
    if (s == 0) {
        throw DimensionError("archive offer matrix needs s >= 1");
    }
    if (archive_col >= s) {
        throw IndexError("archive column " + std::to_string(archive_col) +
                         " out of range for s=" + std::to_string(s));
    }
    std::vector<std::vector<double>> rows(s, std::vector<double>(s, 0.0));
    for (auto& r : rows) {
        r[archive_col] = 1.0;
    }
    return InteractionMatrix(std::move(rows), id);
}

IslandTopology IslandTopology::full(std::size_t s) {
    if (s < 2) {
        throw DimensionError("island migration needs at least two islands");
    }
    std::vector<std::vector<double>> m(s, std::vector<double>(s, 1.0 / static_cast<double>(s - 1)));
    for (std::size_t a = 0; a < s; ++a) {
        m[a][a] = 0.0;
    }
    return {std::move(m)};
}

namespace {

InteractionMatrix build(const IslandTopology& t) {
    for (std::size_t a = 0; a < t.migration.size(); ++a) {
        if (a < t.migration[a].size() && t.migration[a][a] != 0.0) {
            throw ConfigError("island migration must leave the island: diagonal entry " +
                              std::to_string(a) + " is non-zero");
        }
    }
    return InteractionMatrix(t.migration);
}

InteractionMatrix build(const CellularTopology& t) {
    if (t.width == 0 || t.height == 0) {
        throw DimensionError("cellular grid needs width and height >= 1");
    }
    const std::size_t w = t.width;
    const std::size_t h = t.height;
    const std::size_t s = w * h;
    std::vector<std::vector<double>> rows(s, std::vector<double>(s, 0.0));
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            auto& r = rows[y * w + x];
            r[y * w + (x + 1) % w] += 0.25;
            r[y * w + (x + w - 1) % w] += 0.25;
            r[((y + 1) % h) * w + x] += 0.25;
            r[((y + h - 1) % h) * w + x] += 0.25;
        }
    }
    return InteractionMatrix(std::move(rows));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("points of different dimension");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

InteractionMatrix build(const RestrictedMatingTopology& t) {
    const std::size_t s = t.points.size();
    if (s == 0) {
        throw DimensionError("restricted mating needs at least one point");
    }
    std::vector<std::vector<double>> rows(s, std::vector<double>(s, 0.0));
    for (std::size_t a = 0; a < s; ++a) {
        double count = 0.0;
        for (std::size_t b = 0; b < s; ++b) {
            const double d = t.dist ? t.dist(t.points[a], t.points[b])
                                    : euclidean(t.points[a], t.points[b]);
            if (a != b && d < t.sigma) {
                rows[a][b] = 1.0;
                count += 1.0;
            }
        }
        if (count == 0.0) {
            throw IsolationError(a, "restricted mating: point " + std::to_string(a) +
                                        " has no neighbour within sigma");
        }
        for (auto& v : rows[a]) {
            v /= count;
        }
    }
    return InteractionMatrix(std::move(rows));
}

}  // namespace

InteractionMatrix build_topology_im(const Topology& topology) {
    return std::visit([](const auto& t) { return build(t); }, topology);
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::de: return "DE";
        case StrategyKind::gde3: return "GDE3";
        case StrategyKind::mona: return "MONA";
    }
    return "?";
}

// ---------------------------------------------------------------- config

void GsfConfig::validate() const {
    if (strategies.empty()) {
        throw ConfigError("GSF configuration needs at least one subpopulation");
    }
    if (sizes.count() != strategies.size()) {
        throw DimensionError("size vector has " + std::to_string(sizes.count()) +
                             " ratios for " + std::to_string(strategies.size()) +
                             " strategies");
    }
    for (const auto& m : im) {
        if (m.size() != strategies.size()) {
            throw DimensionError("interaction matrix dimension does not match subpopulation count");
        }
    }
    if (!problem) {
        throw ConfigError("GSF configuration has no problem");
    }
    if (generations == 0) {
        throw ConfigError("generation budget must be at least 1");
    }
    for (const auto& st : strategies) {
        st.de.validate();
        if (st.kind == StrategyKind::de && st.de.objective_index >= problem->num_objectives()) {
            throw ConfigError("DE objective index out of range");
        }
        if (st.kind == StrategyKind::mona) {
            st.novelty.validate();
        }
    }
    for (auto n : sizes.sizes()) {
        if (n == 0) {
            throw ConfigError("a subpopulation would be empty; increase the total size");
        }
    }
}

// ---------------------------------------------------------------- runner

namespace {

struct Member {
    std::size_t subpop;
    std::size_t index;
    friend bool operator==(const Member&, const Member&) = default;
};

class Runner {
public:
    Runner(const GsfConfig& config, RngStream rng)
        : cfg_(config), problem_(*config.problem), im_(config.im) {
        const std::size_t s = cfg_.strategies.size();
        sizes_ = cfg_.sizes.sizes();
        for (std::size_t a = 0; a < s; ++a) {
            auto sub = rng.split(a);
            init_.push_back(sub.split(static_cast<std::uint64_t>(RngPurpose::initialization)));
            vary_.push_back(sub.split(static_cast<std::uint64_t>(RngPurpose::variation)));
            select_.push_back(sub.split(static_cast<std::uint64_t>(RngPurpose::parent_selection)));
            route_.push_back(sub.split(static_cast<std::uint64_t>(RngPurpose::archive_routing)));
        }
        archive_of_.assign(s, std::nullopt);
        for (std::size_t a = 0; a < s; ++a) {
            const auto& st = cfg_.strategies[a];
            if (st.kind == StrategyKind::mona) {
                archive_of_[a] = result_.archives.size();
                result_.archives.emplace_back(
                    st.novelty, st.novelty.n_min0.value_or(default_novelty_threshold(problem_)));
            }
        }
        forces_on_ = cfg_.record_forces && problem_.num_objectives() == 2;
        if (forces_on_) {
            result_.subpop_forces.resize(s);
        }
        result_.subpopulations.resize(s);
    }

    GsfRunResult run() {
        initialize();
        for (std::size_t g = 0; g < cfg_.generations; ++g) {
            generation(g);
        }
        finish();
        return std::move(result_);
    }

private:
    void charge(std::size_t n) {
        if (cfg_.max_evaluations && result_.evaluations + n > *cfg_.max_evaluations) {
            throw BudgetError("evaluation budget of " + std::to_string(*cfg_.max_evaluations) +
                              " would be exceeded");
        }
    }

    bool offer(std::size_t acting, const Solution& candidate) {
        if (result_.archives.empty()) {
            return false;
        }
        std::size_t target = acting;
        if (const auto* m = find_interaction(im_, kArchiveOffer)) {
            if (m->disabled()) {
                return false;
            }
            target = sample_source_subpop(*m, acting, route_[acting]);
        }
        if (!archive_of_[target]) {
            return false;
        }
        return result_.archives[*archive_of_[target]].offer(candidate) == OfferOutcome::accepted;
    }

    void initialize() {
        for (std::size_t a = 0; a < sizes_.size(); ++a) {
            charge(sizes_[a]);
            auto& pop = result_.subpopulations[a];
            for (std::size_t i = 0; i < sizes_[a]; ++i) {
                Solution sol = problem_.random_solution(init_[a]);
                sol.origin_subpop = a;
                ++result_.evaluations;
                offer(a, sol);
                pop.push_back(std::move(sol));
            }
        }
    }

    ParentSampler sampler_for(std::size_t a) {
        const auto* sel = find_interaction(im_, kParentSelection);
        if (sel == nullptr || sel->disabled() || (*sel)(a, a) == 1.0) {
            return local_parent_sampler(snapshot_[a]);
        }
        return [this, sel, a](std::size_t target, RngStream&) {
            RngStream& rng = select_[a];
            Member chosen[3];
            for (int k = 0; k < 3; ++k) {
                bool found = false;
                for (int attempt = 0; attempt < 100 && !found; ++attempt) {
                    const std::size_t b = sample_source_subpop(*sel, a, rng);
                    const Member m{b, rng.uniform_index(snapshot_[b].size())};
                    found = !(m == Member{a, target}) &&
                            std::find(chosen, chosen + k, m) == chosen + k;
                    if (found) {
                        chosen[k] = m;
                    }
                }
                if (!found) {
                    return local_parent_sampler(snapshot_[a])(target, rng);
                }
            }
            return ParentTriple{&snapshot_[chosen[0].subpop][chosen[0].index],
                                &snapshot_[chosen[1].subpop][chosen[1].index],
                                &snapshot_[chosen[2].subpop][chosen[2].index]};
        };
    }

    void generation(std::size_t g) {
        if (cfg_.im_schedule) {
            im_ = cfg_.im_schedule(g);
            for (const auto& m : im_) {
                if (m.size() != sizes_.size()) {
                    throw DimensionError("scheduled interaction matrix has the wrong dimension");
                }
            }
        }
        for (auto& ar : result_.archives) {
            ar.set_generation(g + 1);
        }
        snapshot_ = result_.subpopulations;
        for (std::size_t a = 0; a < sizes_.size(); ++a) {
            const auto& st = cfg_.strategies[a];
            auto& pop = result_.subpopulations[a];
            charge(pop.size());
            const auto sampler = sampler_for(a);
            const bool is_mona = st.kind == StrategyKind::mona;
            const TrialObserver observer = [this, a, is_mona](const TrialEvent& e) {
                if (forces_on_) {
                    result_.subpop_forces[a].record(e.parent, e.trial);
                }
                if (!is_mona && (cfg_.offer_all_candidates || e.kept)) {
                    offer(a, e.trial);
                }
            };
            switch (st.kind) {
                case StrategyKind::de:
                    result_.evaluations +=
                        de_generation_step(pop, st.de, sampler, problem_, vary_[a], observer);
                    break;
                case StrategyKind::gde3: {
                    const std::size_t k = st.knn_k == 0 ? problem_.num_objectives() : st.knn_k;
                    result_.evaluations += gde3_generation_step(pop, st.de, k, sampler, problem_,
                                                                vary_[a], observer);
                    break;
                }
                case StrategyKind::mona:
                    result_.evaluations += mona_generation_step(
                        pop, st.de, result_.archives[*archive_of_[a]], sampler, problem_,
                        vary_[a], [this, a](const Solution& t) { return offer(a, t); }, observer);
                    break;
            }
        }
    }

    void finish() {
        std::vector<Solution> pool;
        for (const auto& pop : result_.subpopulations) {
            for (const auto& sol : pop) {
                if (sol.feasible()) {
                    pool.push_back(sol);
                }
            }
        }
        for (const auto& ar : result_.archives) {
            for (auto& sol : ar.nondominated()) {
                pool.push_back(std::move(sol));
            }
        }
        std::set<ObjectiveVector> seen;
        for (auto& sol : nondominated_filter(pool)) {
            if (seen.insert(sol.f()).second) {
                result_.final_set.push_back(std::move(sol));
            }
        }
        if (forces_on_) {
            ForceHistogram total;
            for (const auto& h : result_.subpop_forces) {
                total.merge(h);
            }
            result_.forces = total;
        }
        snapshot_.clear();
    }

    const GsfConfig& cfg_;
    const ProblemSpec& problem_;
    InteractionMatrixSet im_;
    std::vector<std::size_t> sizes_;
    std::vector<RngStream> init_, vary_, select_, route_;
    std::vector<std::optional<std::size_t>> archive_of_;
    std::vector<std::vector<Solution>> snapshot_;
    bool forces_on_ = false;
    GsfRunResult result_;
};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

}  // namespace

GsfRunResult run_gsf(const GsfConfig& config, RngStream rng) {
    config.validate();
    return Runner(config, rng).run();
}

// ---------------------------------------------------------------- presets

std::vector<double> preset_ratios(std::string_view name, std::size_t M) {
    const std::string n = upper(name);
    if (M == 0) {
        throw ConfigError("presets need M >= 1");
    }
    if (n == "GDE3" || n == "MONA") {
        return {1.0};
    }
    if (n == "DE_PER_OBJECTIVE") {
        return std::vector<double>(M, 1.0 / static_cast<double>(M));
    }
    if (n == "SAN" || n == "SAGDE") {
        // One slot per objective plus the last subpopulation taking the rest.
        double each = 0.1;
        if (n == "SAN" && M == 2) {
            each = 0.3;
        }
        if (each * static_cast<double>(M) >= 1.0) {
            each = 0.5 / static_cast<double>(M);
        }
        std::vector<double> r(M, each);
        r.push_back(1.0 - each * static_cast<double>(M));
        return r;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

GsfConfig preset(std::string_view name, std::size_t M, const PresetParams& params) {
    const std::string n = upper(name);
    auto ratios = params.S ? *params.S : preset_ratios(n, M);

    auto de_strategy = [&](std::size_t obj, double cr, double f) {
        StrategyDescriptor d;
        d.kind = StrategyKind::de;
        d.de = DeParams{params.F.value_or(f), params.CR.value_or(cr), obj};
        return d;
    };
    auto other = [&](StrategyKind kind, double cr, double f) {
        StrategyDescriptor d;
        d.kind = kind;
        d.de = DeParams{params.F.value_or(f), params.CR.value_or(cr), 0};
        d.knn_k = params.knn_k;
        d.novelty = params.novelty;
        return d;
    };

    GsfConfig cfg;
    if (n == "SAN") {
        for (std::size_t m = 0; m < M; ++m) {
            cfg.strategies.push_back(de_strategy(m, 0.1, 0.1));
        }
        cfg.strategies.push_back(other(StrategyKind::mona, 0.1, 0.1));
        cfg.im = {uniform_im(M + 1, kParentSelection), archive_offer_im(M + 1, M, kArchiveOffer)};
    } else if (n == "SAGDE") {
        for (std::size_t m = 0; m < M; ++m) {
            cfg.strategies.push_back(de_strategy(m, 0.1, 0.1));
        }
        cfg.strategies.push_back(other(StrategyKind::gde3, 0.1, 0.1));
        cfg.im = {uniform_im(M + 1, kParentSelection)};
    } else if (n == "GDE3") {
        cfg.strategies.push_back(other(StrategyKind::gde3, 0.1, 0.5));
    } else if (n == "MONA") {
        cfg.strategies.push_back(other(StrategyKind::mona, 0.1, 0.1));
    } else if (n == "DE_PER_OBJECTIVE") {
        for (std::size_t m = 0; m < M; ++m) {
            cfg.strategies.push_back(de_strategy(m, 0.6, 0.5));
        }
        cfg.im = {identity_im(M, kParentSelection)};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    if (ratios.size() != cfg.strategies.size()) {
        throw ConfigError("preset " + n + " needs " + std::to_string(cfg.strategies.size()) +
                          " size ratios");
    }
    cfg.sizes = SizeVector(std::move(ratios), params.total_size);
    return cfg;
}

}  // namespace gsf
