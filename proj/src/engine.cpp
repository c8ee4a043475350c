#include "rpd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json_fields.hpp"
#include "rpd/errors.hpp"

namespace rpd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Runs with different seeds read the Sobol sequence from different offsets.
std::uint64_t sobol_offset(std::uint64_t seed) {
    return 1 + (splitmix64(seed) >> 52);
}

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Random: return "random";
        case Phase::Sobol: return "sobol";
        case Phase::Gmm: return "gmm";
    }
    return "unknown";
}

EngineConfig EngineConfig::defaults_for(std::size_t dimension) {
    EngineConfig c;
    c.n_random = std::max<std::size_t>(10, 2 * dimension);
    c.n_min_fit = std::max<std::size_t>(20, 5 * dimension);
    return c;
}

void EngineConfig::validate() const {
    if (n_random < 1) throw ValidationError("engine.n_random must be at least 1");
    if (n_min_fit < n_random) throw ValidationError("engine.n_min_fit must be >= engine.n_random");
    if (!(elite_fraction >= 0.1 && elite_fraction <= 0.5)) {
        throw ValidationError("engine.elite_fraction must lie in [0.1, 0.5]");
    }
    if (gmm_components < 1) throw ValidationError("engine.gmm_components must be at least 1");
    if (!(explore_prob >= 0.0 && explore_prob <= 1.0)) {
        throw ValidationError("engine.explore_prob must lie in [0, 1]");
    }
    if (!(gmm_reg > 0.0)) throw ValidationError("engine gmm_reg must be positive");
}

EngineConfig engine_config_from_json(const nlohmann::json& config, std::size_t dimension) {
    using namespace detail;
    EngineConfig c = EngineConfig::defaults_for(dimension);
    auto it = config.find("engine");
    if (it == config.end()) return c;
    const auto& e = require_object(*it, "engine");
    reject_unknown_keys(e, "engine",
                        {"n_random", "n_min_fit", "elite_fraction", "gmm_components", "explore_prob", "seed", "dedupe"});
    auto count = [&](const char* key) {
        long long v = require_integer(e, "engine", key);
        if (v < 0) throw ParseError(field_path("engine", key) + ": expected a non-negative integer");
        return static_cast<std::size_t>(v);
    };
    if (e.contains("n_random")) c.n_random = count("n_random");
    if (e.contains("n_min_fit")) c.n_min_fit = count("n_min_fit");
    if (e.contains("elite_fraction")) c.elite_fraction = require_number(e, "engine", "elite_fraction");
    if (e.contains("gmm_components")) c.gmm_components = count("gmm_components");
    if (e.contains("explore_prob")) c.explore_prob = require_number(e, "engine", "explore_prob");
    if (e.contains("seed")) {
        const auto& s = e.at("seed");
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
            throw ParseError("engine.seed: expected a non-negative integer");
        }
        c.seed = s.get<std::uint64_t>();
    }
    if (e.contains("dedupe")) c.dedupe = require_bool(e, "engine", "dedupe");
    c.validate();
    return c;
}

EngineConfig uniform_baseline(EngineConfig config) {
    config.n_random = std::numeric_limits<std::size_t>::max();
    config.n_min_fit = std::numeric_limits<std::size_t>::max();
    return config;
}

Engine::Engine(DesignSpace space, std::vector<ObjectiveSpec> objectives, EngineConfig config)
    : space_(std::move(space)),
      objectives_(std::move(objectives)),
      config_(config),
      rng_(config.seed),
      sobol_(std::min(space_.dimension(), SobolSequence::kMaxDimension), sobol_offset(config.seed)) {
    config_.validate();
    validate_specs(objectives_);
    if (space_.dimension() > SobolSequence::kMaxDimension) {
        throw ValidationError("engine supports at most 32 design parameters");
    }
}

Phase Engine::phase() const {
    if (completed_ < config_.n_random) return Phase::Random;
    if (completed_ < config_.n_min_fit || !model_) return Phase::Sobol;
    return Phase::Gmm;
}

std::vector<double> Engine::propose(Phase phase) {
    switch (phase) {
        case Phase::Random:
            return uniform_sample(rng_, space_.dimension());
        case Phase::Sobol:
            return sobol_.next();
        case Phase::Gmm:
            if (rng_.uniform() < config_.explore_prob) return sobol_.next();
            return gmm_sample(*model_, rng_);
    }
    return {};
}

DesignPoint Engine::nearest_unissued(std::span<const double> unit) const {
    const auto params = space_.parameters();
    std::uint64_t best = space_.size();
    double best_dist = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(params.size(), 0);
    for (std::uint64_t flat = 0; flat < space_.size(); ++flat) {
        if (!issued_.count(flat)) {
            double dist = 0.0;
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double diff = params[i].unit_of(idx[i]) - std::clamp(unit[i], 0.0, 1.0);
                dist += diff * diff;
            }
            if (dist < best_dist) {
                best_dist = dist;
                best = flat;
            }
        }
        for (std::size_t i = params.size(); i-- > 0;) {
            if (++idx[i] < params[i].count()) break;
            idx[i] = 0;
        }
    }
    return space_.at(best);
}

Trial Engine::suggest() {
    const Phase phase = this->phase();
    auto unit = propose(phase);
    DesignPoint design = snap(space_, unit);
    std::uint64_t flat = space_.flat_index(design);

    if (config_.dedupe && issued_.count(flat) && issued_.size() < space_.size()) {
        for (std::size_t attempt = 0; attempt < config_.max_redraws && issued_.count(flat); ++attempt) {
            unit = propose(phase);
            design = snap(space_, unit);
            flat = space_.flat_index(design);
        }
        if (issued_.count(flat)) {
            design = nearest_unissued(unit);
            flat = space_.flat_index(design);
        }
    }
    issued_.insert(flat);

    Trial trial;
    trial.id = history_.size();
    trial.design = std::move(design);
    trial.phase = phase;
    history_.push_back(trial);
    return trial;
}

double Engine::report(std::uint64_t trial_id, const ObjectiveVector& worst_case) {
    if (trial_id >= history_.size()) {
        throw std::invalid_argument("report: unknown trial id " + std::to_string(trial_id));
    }
    Trial& trial = history_[trial_id];
    if (trial.status == TrialStatus::Reported) {
        throw std::invalid_argument("report: trial " + std::to_string(trial_id) + " was already reported");
    }
    const double score = scalarize(worst_case, objectives_);
    trial.status = TrialStatus::Reported;
    trial.score = score;
    ++completed_;
    cache_.insert_or_assign(space_.flat_index(trial.design), worst_case);

    if (score < best_score_) {
        best_score_ = score;
        best_design_ = trial.design;
    }
    if (completed_ >= config_.n_min_fit) refit();
    return best_score_;
}

void Engine::refit() {
    std::vector<const Trial*> finite;
    for (const auto& t : history_) {
        if (t.status == TrialStatus::Reported && std::isfinite(*t.score)) finite.push_back(&t);
    }
    if (finite.empty()) {
        model_.reset();
        elite_size_ = 0;
        return;
    }
    std::stable_sort(finite.begin(), finite.end(),
                     [](const Trial* a, const Trial* b) { return *a->score < *b->score; });
    const auto n_elite = static_cast<std::size_t>(
        std::ceil(config_.elite_fraction * static_cast<double>(finite.size()) - 1e-12));
    elite_size_ = std::clamp<std::size_t>(n_elite, 1, finite.size());

    std::vector<std::vector<double>> samples;
    samples.reserve(elite_size_);
    for (std::size_t i = 0; i < elite_size_; ++i) samples.push_back(space_.to_unit(finite[i]->design));

    GmmFitOptions options;
    options.components = config_.gmm_components;
    options.reg = config_.gmm_reg;
    model_ = gmm_fit(samples, options).model;
}

const ObjectiveVector* Engine::cached(const DesignPoint& design) const {
    if (!space_.contains(design)) return nullptr;
    auto it = cache_.find(space_.flat_index(design));
    return it == cache_.end() ? nullptr : &it->second;
}

RunTrace run_to_budget(Engine& engine, const RobustObjective& objective, std::size_t budget) {
    RunTrace trace;
    trace.score_star.reserve(budget);
    for (std::size_t n = 0; n < budget; ++n) {
        Trial trial = engine.suggest();
        ObjectiveVector vector;
        const ObjectiveVector* hit = engine.config().dedupe ? engine.cached(trial.design) : nullptr;
        if (hit) {
            vector = *hit;
        } else {
            try {
                vector = objective(trial.design);
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << "trial " << trial.id << " at design (";
                for (std::size_t i = 0; i < trial.design.values.size(); ++i) {
                    msg << (i ? ", " : "") << trial.design.values[i];
                }
                msg << "): " << e.what();
                throw TrialError(trial.id, trial.design, msg.str());
            }
            ++trace.evaluations;
        }
        trace.score_star.push_back(engine.report(trial.id, vector));
    }
    trace.best_design = engine.best_design();
    return trace;
}

}  // namespace rpd
