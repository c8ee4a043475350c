// Reference evaluator child for the exec: selector. Reads one JSON request
// per line on stdin and answers on stdout.
//
//   rpd_child --model pa|lna           surrogate metrics
//   rpd_child --fixed '{"a": 1.5}'     the same metrics for every request
//
// --misbehave selects a protocol fault for tests: error, hang, bad-id, exit,
// garbage or missing.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rpd/evaluators.hpp"

using nlohmann::ordered_json;

namespace {

rpd::DeviceGeometry geometry_of(const ordered_json& design) {
    rpd::DeviceGeometry g;
    g.vds = design.at("V_DS").get<double>();
    g.nf = design.at("N_f").get<double>();
    g.wf = design.at("W_f").get<double>();
    g.gdg = design.at("GDG").get<double>();
    g.gsg = design.at("GSG").get<double>();
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"JSON-lines evaluator child"};
    std::string model = "pa";
    std::string fixed;
    std::string misbehave;
    app.add_option("--model", model, "pa or lna")->check(CLI::IsMember({"pa", "lna"}));
    app.add_option("--fixed", fixed, "JSON object of metrics returned for every request");
    app.add_option("--misbehave", misbehave, "Protocol fault to inject")
        ->check(CLI::IsMember({"error", "hang", "bad-id", "exit", "garbage", "missing"}));
    CLI11_PARSE(app, argc, argv);

    ordered_json fixed_metrics;
    if (!fixed.empty()) fixed_metrics = ordered_json::parse(fixed);

    std::string line;
    while (std::getline(std::cin, line)) {
        ordered_json request;
        try {
            request = ordered_json::parse(line);
        } catch (const std::exception& e) {
            std::cout << ordered_json{{"id", -1}, {"error", std::string("bad request: ") + e.what()}}.dump() << "\n"
                      << std::flush;
            continue;
        }
        const auto id = request.value("id", -1LL);
        ordered_json response{{"id", id}};

        if (misbehave == "hang") {
            std::this_thread::sleep_for(std::chrono::hours(1));
        } else if (misbehave == "exit") {
            return 3;
        } else if (misbehave == "garbage") {
            std::cout << "this is not json\n" << std::flush;
            continue;
        } else if (misbehave == "error") {
            response["error"] = "convergence";
            std::cout << response.dump() << "\n" << std::flush;
            continue;
        } else if (misbehave == "bad-id") {
            response["id"] = id + 1;
        }

        try {
            if (!fixed_metrics.is_null()) {
                response["metrics"] = fixed_metrics;
            } else {
                const auto g = geometry_of(request.at("design"));
                const double vgs = request.at("operating").begin().value().get<double>();
                const auto metrics = model == "pa" ? rpd::surrogate_pa(g, vgs) : rpd::surrogate_lna(g, vgs);
                response["metrics"] = ordered_json::object();
                for (const auto& [name, value] : metrics) response["metrics"][name] = value;
            }
            if (misbehave == "missing" && !response["metrics"].empty()) {
                response["metrics"].erase(response["metrics"].begin().key());
            }
        } catch (const std::exception& e) {
            response.erase("metrics");
            response["error"] = e.what();
        }
        std::cout << response.dump() << "\n" << std::flush;
    }
    return 0;
}
