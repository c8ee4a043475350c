#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpd/design_space.hpp"
#include "rpd/objectives.hpp"
#include "rpd/sampling.hpp"

namespace rpd {

struct EngineConfig {
    std::size_t n_random = 10;   // uniform proposals until this many reports
    std::size_t n_min_fit = 20;  // Sobol until this many reports, then GMM
    double elite_fraction = 0.25;
    std::size_t gmm_components = 1;
    double explore_prob = 0.1;  // chance of a Sobol proposal in the GMM phase
    std::uint64_t seed = 0;
    bool dedupe = true;

    // Not part of the config file schema.
    double gmm_reg = 4e-3;
    std::size_t max_redraws = 16;

    // n_random = max(10, 2a), n_min_fit = max(20, 5a).
    static EngineConfig defaults_for(std::size_t dimension);

    // Throws ValidationError.
    void validate() const;
};

// Reads the optional `engine` section; absent keys keep their defaults.
EngineConfig engine_config_from_json(const nlohmann::json& config, std::size_t dimension);

// Same settings with the schedule pinned to uniform sampling forever.
EngineConfig uniform_baseline(EngineConfig config);

enum class Phase { Random, Sobol, Gmm };
const char* to_string(Phase phase);

enum class TrialStatus { Pending, Reported };

struct Trial {
    std::uint64_t id = 0;
    DesignPoint design;
    TrialStatus status = TrialStatus::Pending;
    std::optional<double> score;  // set iff reported
    Phase phase = Phase::Random;  // mechanism that proposed the design
};

/**
 * Ask/tell optimizer over a gridded design space.
 *
 * The proposal mechanism depends on the number of completed reports c:
 * uniform sampling while c < n_random, Sobol while c < n_min_fit, then a
 * diagonal GMM fitted to the elite fraction of finite-scored reports (with
 * an explore_prob chance of a Sobol point instead). Proposals are snapped
 * to the grid.
 *
 * With dedupe on, a proposal that hits an already issued design is redrawn
 * up to max_redraws times; if it still collides, the nearest design that
 * has not been issued yet is used. Duplicates are only issued once every
 * grid design has been issued.
 *
 * Not thread-safe: callers serialize suggest/report.
 */
class Engine {
public:
    Engine(DesignSpace space, std::vector<ObjectiveSpec> objectives, EngineConfig config);

    Trial suggest();

    // Scores the worst-case vector and returns the updated Score*. Throws
    // std::invalid_argument for unknown or already reported ids.
    double report(std::uint64_t trial_id, const ObjectiveVector& worst_case);

    double best_score() const { return best_score_; }
    const std::optional<DesignPoint>& best_design() const { return best_design_; }
    Phase phase() const;  // mechanism for the next suggestion
    std::size_t completed() const { return completed_; }
    const std::vector<Trial>& history() const { return history_; }
    const EngineConfig& config() const { return config_; }
    const DesignSpace& space() const { return space_; }
    std::span<const ObjectiveSpec> objectives() const { return objectives_; }

    const std::optional<GmmModel>& model() const { return model_; }
    std::size_t elite_size() const { return elite_size_; }

    // Worst-case vector previously reported for this design, if any.
    const ObjectiveVector* cached(const DesignPoint& design) const;

private:
    std::vector<double> propose(Phase phase);
    DesignPoint nearest_unissued(std::span<const double> unit) const;
    void refit();

    DesignSpace space_;
    std::vector<ObjectiveSpec> objectives_;
    EngineConfig config_;
    Rng rng_;
    SobolSequence sobol_;

    std::vector<Trial> history_;
    std::size_t completed_ = 0;
    double best_score_ = kInfinity;
    std::optional<DesignPoint> best_design_;

    std::unordered_set<std::uint64_t> issued_;
    std::unordered_map<std::uint64_t, ObjectiveVector> cache_;

    std::optional<GmmModel> model_;
    std::size_t elite_size_ = 0;
};

/// Raised by run_to_budget when the evaluator fails; wraps the cause.
class TrialError : public std::runtime_error {
public:
    TrialError(std::uint64_t trial_id, DesignPoint design, const std::string& message)
        : std::runtime_error(message), trial_id_(trial_id), design_(std::move(design)) {}
    std::uint64_t trial_id() const { return trial_id_; }
    const DesignPoint& design() const { return design_; }

private:
    std::uint64_t trial_id_;
    DesignPoint design_;
};

using RobustObjective = std::function<ObjectiveVector(const DesignPoint&)>;

struct RunTrace {
    std::vector<double> score_star;  // after each trial, non-increasing
    std::size_t evaluations = 0;     // calls made to the objective
    std::optional<DesignPoint> best_design;
};

// Synchronous suggest/evaluate/report loop. With dedupe on, designs already
// reported are answered from the engine's cache without calling objective.
RunTrace run_to_budget(Engine& engine, const RobustObjective& objective, std::size_t budget);

}  // namespace rpd
