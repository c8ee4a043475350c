#include "rpd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rpd/errors.hpp"

namespace rpd {

namespace {

// Runs body(evaluator, item) for items [0, count) on `workers` threads, each
// owning one evaluator. The exception of the lowest failing item wins.
template <typename Body>
void parallel_items(std::size_t count, std::size_t workers, const EvaluatorFactory& factory, Body body) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        auto evaluator = factory.make();
        for (std::size_t i = 0; i < count; ++i) body(*evaluator, i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mu;
    std::size_t failed_item = count;
    std::exception_ptr error;
    auto work = [&] {
        std::unique_ptr<Evaluator> evaluator;
        try {
            evaluator = factory.make();
        } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
            failed = true;
            return;
        }
        while (!failed) {
            const std::size_t i = next++;
            if (i >= count) return;
            try {
                body(*evaluator, i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_item) {
                    failed_item = i;
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void check_cap(const DesignSpace& space, std::uint64_t cap) {
    if (space.size() > cap) {
        throw ValidationError("grid has " + std::to_string(space.size()) + " designs, above the exhaustive cap of " +
                              std::to_string(cap) + "; use the optimize subcommand for grids this large");
    }
}

}  // namespace

std::vector<std::vector<EvaluationRecord>> sweep_grid(const DesignSpace& space, const EvaluatorFactory& factory,
                                                      std::uint64_t cap, std::size_t workers) {
    check_cap(space, cap);
    const auto designs = enumerate_grid(space);
    std::vector<std::vector<EvaluationRecord>> out(designs.size());
    parallel_items(designs.size(), workers, factory, [&](Evaluator& evaluator, std::size_t i) {
        out[i] = sweep_design(evaluator, space, designs[i]);
    });
    return out;
}

ExhaustiveResult exhaustive_scan(const DesignSpace& space, const EvaluatorFactory& factory,
                                 std::span<const ObjectiveSpec> objectives,
                                 std::span<const ConstraintSpec> constraints, std::uint64_t cap, std::size_t workers) {
    check_cap(space, cap);
    const auto designs = enumerate_grid(space);
    ExhaustiveResult out;
    out.summaries.resize(designs.size());
    out.scores.resize(designs.size());
    parallel_items(designs.size(), workers, factory, [&](Evaluator& evaluator, std::size_t i) {
        out.summaries[i] = robust_evaluate(evaluator, space, designs[i], objectives, constraints);
        out.scores[i] = scalarize(out.summaries[i].worst_case, objectives);
    });
    for (double s : out.scores) out.optimal_score = std::min(out.optimal_score, s);
    return out;
}

double optimal_score(const DesignSpace& space, Evaluator& evaluator, std::span<const ObjectiveSpec> objectives,
                     std::span<const ConstraintSpec> constraints, std::uint64_t cap) {
    check_cap(space, cap);
    double best = kInfinity;
    for (const auto& design : enumerate_grid(space)) {
        auto summary = robust_evaluate(evaluator, space, design, objectives, constraints);
        best = std::min(best, scalarize(summary.worst_case, objectives));
    }
    return best;
}

bool within_tolerance(double score, double optimal, double tolerance) {
    if (std::isinf(optimal)) return std::isinf(score);
    return score <= optimal + tolerance * std::max(std::fabs(optimal), 1.0);
}

ExperimentReport aggregate(std::vector<std::vector<double>> traces, double optimal, double tolerance) {
    ExperimentReport report;
    report.optimal_score = optimal;
    report.tolerance = tolerance;
    if (traces.empty()) return report;
    const std::size_t trials = traces.front().size();
    for (const auto& t : traces) {
        if (t.size() != trials) throw std::invalid_argument("aggregate: traces differ in length");
    }
    const auto runs = static_cast<double>(traces.size());
    for (std::size_t n = 0; n < trials; ++n) {
        ExperimentRow row;
        row.n = n + 1;
        bool any_inf = false;
        double sum = 0.0;
        std::size_t within = 0;
        for (const auto& t : traces) {
            any_inf = any_inf || std::isinf(t[n]);
            sum += t[n];
            within += within_tolerance(t[n], optimal, tolerance) ? 1 : 0;
        }
        row.frac_within_tol = static_cast<double>(within) / runs;
        if (any_inf) {
            // Spread is undefined while some run has no finite score yet.
            row.mean_score_star = kInfinity;
            row.std_score_star = kInfinity;
        } else {
            row.mean_score_star = sum / runs;
            double ss = 0.0;
            for (const auto& t : traces) {
                const double d = t[n] - row.mean_score_star;
                ss += d * d;
            }
            row.std_score_star = std::sqrt(ss / runs);
        }
        report.rows.push_back(row);
    }
    report.traces = std::move(traces);
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory) {
    auto scan = exhaustive_scan(config.space, factory, config.objectives, config.constraints, config.exhaustive_cap,
                                config.workers);
    return run_experiment(config, factory, scan.optimal_score);
}

ExperimentReport run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory,
                                double known_optimal_score) {
    if (config.runs < 1) throw ValidationError("experiment needs at least one run");
    if (config.trials < 1) throw ValidationError("experiment needs at least one trial per run");
    if (!(config.tolerance >= 0.0)) throw ValidationError("tolerance must be non-negative");

    std::vector<std::vector<double>> traces(config.runs);
    parallel_items(config.runs, config.workers, factory, [&](Evaluator& evaluator, std::size_t r) {
        EngineConfig engine_config = config.engine;
        engine_config.seed = config.seed_base + r;
        Engine engine(config.space, config.objectives, engine_config);
        auto objective = [&](const DesignPoint& d) {
            return robust_evaluate(evaluator, config.space, d, config.objectives, config.constraints).worst_case;
        };
        traces[r] = run_to_budget(engine, objective, config.trials).score_star;
    });
    return aggregate(std::move(traces), known_optimal_score, config.tolerance);
}

}  // namespace rpd
