// rpd: gridded robust design studies and DFO experiments from the command line.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rpd/errors.hpp"
#include "rpd/experiment.hpp"
#include "rpd/number_format.hpp"
#include "rpd/problem.hpp"

namespace fs = std::filesystem;
using namespace rpd;

namespace {

struct Options {
    std::string config;
    std::string evaluator;
    std::optional<std::uint64_t> seed;
    fs::path out = "out";
    std::optional<std::size_t> trials;
    std::optional<std::size_t> runs;
    std::size_t workers = 1;
    double tolerance = 0.05;
};

std::ofstream open_output(const fs::path& dir, const char* name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void close_output(std::ofstream& out, const fs::path& dir, const char* name) {
    out.close();
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
}

std::string describe(const DesignSpace& space, const DesignPoint& design) {
    std::string s;
    for (std::size_t i = 0; i < design.values.size(); ++i) {
        if (i) s += ' ';
        s += space.parameters()[i].name() + "=" + format_double(design.values[i]);
    }
    return s;
}

EvaluatorFactory factory_for(const Options& o, const Problem& problem) {
    if (o.evaluator.empty()) throw ValidationError("--evaluator is required for this subcommand");
    return EvaluatorFactory(o.evaluator, problem.space, problem.required_metrics());
}

int cmd_enumerate(const Options& o, const Problem& problem) {
    const auto& space = problem.space;
    const auto designs = enumerate_grid(space);
    auto out = open_output(o.out, "designs.csv");
    for (std::size_t i = 0; i < space.dimension(); ++i) out << (i ? "," : "") << space.parameters()[i].name();
    out << "\n";
    for (const auto& d : designs) {
        for (std::size_t i = 0; i < d.values.size(); ++i) out << (i ? "," : "") << format_double(d.values[i]);
        out << "\n";
    }
    close_output(out, o.out, "designs.csv");
    std::cout << designs.size() << "\n";
    std::cout << "operating points: " << space.operating().size() << "\n";
    std::cout << "evaluation keys: " << designs.size() * space.operating().size() << "\n";
    return 0;
}

int cmd_sweep(const Options& o, const Problem& problem) {
    auto factory = factory_for(o, problem);
    const auto groups = sweep_grid(problem.space, factory, kDefaultExhaustiveCap, o.workers);
    std::vector<EvaluationRecord> records;
    for (const auto& g : groups) records.insert(records.end(), g.begin(), g.end());
    auto out = open_output(o.out, "table.csv");
    write_table(out, problem.space, records, factory.metric_names());
    close_output(out, o.out, "table.csv");
    std::cout << "designs: " << groups.size() << "\n";
    std::cout << "rows: " << records.size() << "\n";
    std::cout << "wrote " << (o.out / "table.csv").string() << "\n";
    return 0;
}

ExhaustiveResult scan(const Options& o, const Problem& problem) {
    auto factory = factory_for(o, problem);
    return exhaustive_scan(problem.space, factory, problem.objectives, problem.constraints, kDefaultExhaustiveCap,
                           o.workers);
}

int cmd_robust(const Options& o, const Problem& problem) {
    const auto result = scan(o, problem);
    std::size_t feasible = 0;
    for (const auto& s : result.summaries) feasible += s.feasible ? 1 : 0;
    auto out = open_output(o.out, "robust.csv");
    write_robust_csv(out, problem.space, problem.objectives, problem.constraints, result.summaries);
    close_output(out, o.out, "robust.csv");
    std::cout << "designs: " << result.summaries.size() << "\n";
    std::cout << "feasible: " << feasible << "\n";
    std::cout << "infeasible: " << result.summaries.size() - feasible << "\n";
    return 0;
}

int cmd_pareto(const Options& o, const Problem& problem) {
    auto result = scan(o, problem);
    ParetoStudy study{problem.space, problem.objectives, std::move(result.summaries), {}};
    study.front = pareto_front(study.summaries, study.objectives);
    auto out = open_output(o.out, "front.csv");
    write_front_csv(out, study);
    close_output(out, o.out, "front.csv");
    std::cout << "optimal: " << study.front.optimal.size() << "\n";
    std::cout << "dominated: " << study.front.dominated.size() << "\n";
    std::cout << "infeasible: " << study.front.infeasible << "\n";
    return 0;
}

int cmd_optimize(const Options& o, const Problem& problem) {
    auto factory = factory_for(o, problem);
    EngineConfig config = problem.engine;
    if (o.seed) config.seed = *o.seed;
    const std::size_t trials = o.trials.value_or(75);
    if (trials < 1) throw ValidationError("--trials must be at least 1");

    auto evaluator = factory.make();
    Engine engine(problem.space, problem.objectives, config);
    auto objective = [&](const DesignPoint& d) {
        return robust_evaluate(*evaluator, problem.space, d, problem.objectives, problem.constraints).worst_case;
    };
    const auto trace = run_to_budget(engine, objective, trials);
    std::cout << "seed: " << config.seed << "\n";
    std::cout << "trials: " << trials << "\n";
    std::cout << "evaluations: " << trace.evaluations << "\n";
    std::cout << "score_star: " << format_double(trace.score_star.back()) << "\n";
    std::cout << "best: " << (trace.best_design ? describe(problem.space, *trace.best_design) : "none") << "\n";
    return 0;
}

int cmd_experiment(const Options& o, const Problem& problem) {
    auto factory = factory_for(o, problem);
    ExperimentConfig config{problem.space, problem.objectives, problem.constraints, problem.engine};
    config.runs = o.runs.value_or(100);
    config.trials = o.trials.value_or(75);
    config.seed_base = o.seed.value_or(problem.engine.seed);
    config.tolerance = o.tolerance;
    config.workers = o.workers;

    auto result = exhaustive_scan(config.space, factory, config.objectives, config.constraints,
                                  config.exhaustive_cap, config.workers);
    const auto report = run_experiment(config, factory, result.optimal_score);
    ParetoStudy study{problem.space, problem.objectives, std::move(result.summaries), {}};
    study.front = pareto_front(study.summaries, study.objectives);
    const auto written = emit_report(report, o.out, &study, true);

    std::cout << "optimal_score: " << format_double(report.optimal_score) << "\n";
    const std::size_t step = std::max<std::size_t>(1, config.trials / 5);
    for (std::size_t n = step; n <= config.trials; n += step) {
        const auto& row = report.at(n);
        std::cout << "n=" << n << " mean=" << format_double(row.mean_score_star)
                  << " std=" << format_double(row.std_score_star) << " within=" << format_double(row.frac_within_tol)
                  << "\n";
    }
    for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust gridded design: sweeps, worst-case summaries, Pareto fronts and DFO experiments"};
    app.fallthrough();
    app.require_subcommand(1, 1);

    Options o;
    app.add_option("--config", o.config, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--evaluator", o.evaluator, "surrogate-pa, surrogate-lna, table:<path> or exec:<command>");
    app.add_option("--seed", o.seed, "Engine seed (optimize) or seed base (experiment)");
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--trials", o.trials, "Trials per run (default 75)");
    app.add_option("--runs", o.runs, "Independent runs (default 100)");
    app.add_option("--workers", o.workers, "Parallel evaluators")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tolerance", o.tolerance, "Within-tolerance band")->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    auto* enumerate = app.add_subcommand("enumerate", "Print the grid size and write designs.csv");
    auto* sweep = app.add_subcommand("sweep", "Evaluate the full grid and write table.csv");
    auto* robust = app.add_subcommand("robust", "Write per-design worst cases and feasibility (robust.csv)");
    auto* pareto = app.add_subcommand("pareto", "Write front.csv and print Pareto counts");
    auto* optimize = app.add_subcommand("optimize", "Run one seeded engine run");
    auto* experiment = app.add_subcommand("experiment", "Run the seeded multi-run harness and write reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const Problem problem = load_problem(o.config);
        if (enumerate->parsed()) return cmd_enumerate(o, problem);
        if (sweep->parsed()) return cmd_sweep(o, problem);
        if (robust->parsed()) return cmd_robust(o, problem);
        if (pareto->parsed()) return cmd_pareto(o, problem);
        if (optimize->parsed()) return cmd_optimize(o, problem);
        if (experiment->parsed()) return cmd_experiment(o, problem);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
