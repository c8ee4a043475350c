#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rpd/design_space.hpp"
#include "rpd/engine.hpp"
#include "rpd/evaluators.hpp"
#include "rpd/objectives.hpp"
#include "rpd/pareto.hpp"
#include "rpd/robust.hpp"

namespace rpd {

inline constexpr std::uint64_t kDefaultExhaustiveCap = 1'000'000;

struct ExperimentConfig {
    DesignSpace space;
    std::vector<ObjectiveSpec> objectives;
    std::vector<ConstraintSpec> constraints;
    EngineConfig engine;
    std::size_t runs = 100;
    std::size_t trials = 75;
    std::uint64_t seed_base = 0;  // run r uses seed_base + r
    double tolerance = 0.05;
    std::size_t workers = 1;
    std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
};

struct ExperimentRow {
    std::size_t n = 0;  // trial count, 1-based
    double mean_score_star = 0.0;
    double std_score_star = 0.0;  // population
    double frac_within_tol = 0.0;

    friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentReport {
    double optimal_score = kInfinity;
    double tolerance = 0.05;
    std::vector<ExperimentRow> rows;          // one per n = 1..trials
    std::vector<std::vector<double>> traces;  // per run, Score* after each trial

    const ExperimentRow& at(std::size_t n) const { return rows.at(n - 1); }
};

/// Every grid design robustified and scored.
struct ExhaustiveResult {
    std::vector<RobustSummary> summaries;  // enumerate_grid order
    std::vector<double> scores;
    double optimal_score = kInfinity;
};

// Every design over the full operating grid, in enumerate_grid order.
// Throws ValidationError when the grid exceeds cap.
std::vector<std::vector<EvaluationRecord>> sweep_grid(const DesignSpace& space, const EvaluatorFactory& factory,
                                                      std::uint64_t cap = kDefaultExhaustiveCap,
                                                      std::size_t workers = 1);

// Throws ValidationError when the grid exceeds cap.
ExhaustiveResult exhaustive_scan(const DesignSpace& space, const EvaluatorFactory& factory,
                                 std::span<const ObjectiveSpec> objectives,
                                 std::span<const ConstraintSpec> constraints,
                                 std::uint64_t cap = kDefaultExhaustiveCap, std::size_t workers = 1);

// Lowest achievable score over the grid; +inf iff nothing is feasible.
double optimal_score(const DesignSpace& space, Evaluator& evaluator, std::span<const ObjectiveSpec> objectives,
                     std::span<const ConstraintSpec> constraints, std::uint64_t cap = kDefaultExhaustiveCap);

// Score* within tolerance of the optimum: score <= optimal + tol * max(|optimal|, 1).
bool within_tolerance(double score, double optimal, double tolerance);

// Mean, population std and within-tolerance fraction at every n. Runs are
// reduced in index order, so the result does not depend on scheduling.
ExperimentReport aggregate(std::vector<std::vector<double>> traces, double optimal, double tolerance);

// Seeded independent runs; computes the optimum exhaustively first.
ExperimentReport run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory);
ExperimentReport run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory,
                                double known_optimal_score);

// Robust summaries plus their Pareto partition, for front.csv.
struct ParetoStudy {
    DesignSpace space;
    std::vector<ObjectiveSpec> objectives;
    std::vector<RobustSummary> summaries;
    FrontResult front;
};

// ---------------------------------------------------------------------------
// Report files. Numbers use the shortest round-trip text, so every writer
// below has a reader that recovers identical values.

void write_summary_csv(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_summary_csv(std::istream& in);

void write_traces_csv(std::ostream& out, const ExperimentReport& report);
std::vector<std::vector<double>> read_traces_csv(std::istream& in);

void write_front_csv(std::ostream& out, const ParetoStudy& study);

struct FrontRow {
    DesignPoint design;
    std::vector<double> objectives;  // in objective-spec order
    bool feasible = false;
    bool pareto = false;
};
std::vector<FrontRow> read_front_csv(std::istream& in, const DesignSpace& space,
                                     std::span<const ObjectiveSpec> objectives);

// Per-design worst cases, constraint worst values and feasibility.
void write_robust_csv(std::ostream& out, const DesignSpace& space, std::span<const ObjectiveSpec> objectives,
                      std::span<const ConstraintSpec> constraints, std::span<const RobustSummary> summaries);

void write_score_svg(std::ostream& out, const ExperimentReport& report);

// summary.csv, traces.csv, front.csv (with a study) and score_vs_trials.svg
// (when write_svg). Returns the paths written. IO failures name the path.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir,
                                               const ParetoStudy* study = nullptr, bool write_svg = true);

}  // namespace rpd
