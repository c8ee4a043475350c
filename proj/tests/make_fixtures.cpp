// Regenerates the golden fixtures. Run after any change to sampler or engine
// internals, review the diff, and commit the new files.

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "golden.hpp"

namespace {

void write(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main() {
    try {
        write(support::fixture("pa_trace_seed7.csv"), golden::pa_trace_csv());

        const auto problem = support::pa_problem();
        rpd::EvaluatorFactory factory("surrogate-pa", problem.space, problem.required_metrics());
        rpd::SurrogateEvaluator evaluator(rpd::SurrogateModel::PowerAmplifier, problem.space);
        const double optimum = rpd::optimal_score(problem.space, evaluator, problem.objectives, problem.constraints);
        write(support::fixture("pa_optimal_score.txt"), rpd::format_double(optimum) + "\n");

        write(support::fixture("pa_search_summary.csv"), golden::summary_csv(golden::search_report(false, 4)));
        write(support::fixture("pa_search_baseline_summary.csv"), golden::summary_csv(golden::search_report(true, 4)));

        // The same search problem as a config file for the command line.
        const auto config = golden::search_config();
        std::ifstream in(support::source_dir() / "configs" / "pa.json");
        auto doc = nlohmann::ordered_json::parse(in);
        doc["objectives"] = nlohmann::ordered_json::array();
        for (const auto& o : config.objectives) {
            doc["objectives"].push_back({{"name", o.name},
                                         {"direction", rpd::to_string(o.direction)},
                                         {"target", o.target},
                                         {"limit", o.limit},
                                         {"priority", o.priority}});
        }
        write(support::source_dir() / "configs" / "pa_search.json", doc.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
