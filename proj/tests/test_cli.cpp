#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "rpd/experiment.hpp"
#include "rpd/number_format.hpp"
#include "support.hpp"

using namespace rpd;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RPD_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string config(const std::string& name) { return (support::source_dir() / "configs" / name).string(); }

// Value after "key: " on its own line.
std::string field(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
    return "";
}

std::vector<FrontRow> load_front(const std::filesystem::path& path, const Problem& p) {
    std::ifstream in(path);
    REQUIRE(in);
    return read_front_csv(in, p.space, p.objectives);
}

}  // namespace

TEST_CASE("enumerate prints the grid size") {
    const auto dir = support::scratch_dir("cli_enum");
    const auto r = run("enumerate --config " + config("pa.json") + " --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.rfind("672\n", 0) == 0);
    CHECK(field(r.out, "operating points") == "7");
    CHECK(field(r.out, "evaluation keys") == "4704");
    std::ifstream in(dir / "designs.csv");
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 673);

    const auto lna = run("enumerate --config " + config("lna.json") + " --out " + dir.string());
    CHECK(lna.out.rfind("2352\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("pareto on the LNA config agrees with front.csv and the library") {
    const auto dir = support::scratch_dir("cli_pareto");
    const auto r = run("pareto --config " + config("lna.json") + " --evaluator surrogate-lna --workers 2 --out " +
                       dir.string());
    REQUIRE(r.status == 0);
    const auto problem = support::lna_problem();
    const auto rows = load_front(dir / "front.csv", problem);
    CHECK(rows.size() == 2352);
    std::size_t flagged = 0;
    for (const auto& row : rows) flagged += row.pareto ? 1 : 0;
    CHECK(field(r.out, "optimal") == std::to_string(flagged));
    CHECK(field(r.out, "infeasible") == "0");

    EvaluatorFactory factory("surrogate-lna", problem.space, problem.required_metrics());
    const auto scan = exhaustive_scan(problem.space, factory, problem.objectives, problem.constraints);
    const auto front = pareto_front(scan.summaries, problem.objectives);
    CHECK(flagged == front.optimal.size());
    CHECK(field(r.out, "dominated") == std::to_string(front.dominated.size()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("optimize is reproducible for a seed") {
    const std::string args = "optimize --config " + config("pa.json") + " --evaluator surrogate-pa --seed 3 --trials 40";
    const auto a = run(args), b = run(args);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(field(a.out, "seed") == "3");
    CHECK(field(a.out, "trials") == "40");
    CHECK(field(a.out, "best").find("V_DS=") == 0);
    const auto score = parse_double(field(a.out, "score_star"));
    REQUIRE(score.has_value());
    CHECK(*score >= 0.249511 - 1e-6);
    const auto other = run("optimize --config " + config("pa.json") + " --evaluator surrogate-pa --seed 4 --trials 40");
    CHECK(other.status == 0);
}

TEST_CASE("sweep output drives robust and pareto through a table") {
    const auto dir = support::scratch_dir("cli_sweep");
    const auto sweep = run("sweep --config " + config("pa.json") + " --evaluator surrogate-pa --out " + dir.string());
    REQUIRE(sweep.status == 0);
    CHECK(field(sweep.out, "designs") == "672");
    CHECK(field(sweep.out, "rows") == "4704");

    const auto table = "table:" + (dir / "table.csv").string();
    const auto robust = run("robust --config " + config("pa.json") + " --evaluator " + table + " --out " + dir.string());
    REQUIRE(robust.status == 0);
    CHECK(field(robust.out, "designs") == "672");

    const auto problem = support::pa_problem();
    EvaluatorFactory factory("surrogate-pa", problem.space, problem.required_metrics());
    const auto scan = exhaustive_scan(problem.space, factory, problem.objectives, problem.constraints);
    std::size_t feasible = 0;
    for (const auto& s : scan.summaries) feasible += s.feasible ? 1 : 0;
    CHECK(field(robust.out, "feasible") == std::to_string(feasible));
    CHECK(field(robust.out, "infeasible") == std::to_string(672 - feasible));

    std::ostringstream want;
    write_robust_csv(want, problem.space, problem.objectives, problem.constraints, scan.summaries);
    std::ifstream got_in(dir / "robust.csv");
    std::ostringstream got;
    got << got_in.rdbuf();
    CHECK(got.str() == want.str());

    const auto pareto = run("pareto --config " + config("pa.json") + " --evaluator " + table + " --out " + dir.string());
    REQUIRE(pareto.status == 0);
    const auto front = pareto_front(scan.summaries, problem.objectives);
    CHECK(field(pareto.out, "optimal") == std::to_string(front.optimal.size()));
    CHECK(field(pareto.out, "dominated") == std::to_string(front.dominated.size()));
    CHECK(field(pareto.out, "infeasible") == std::to_string(front.infeasible));
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment writes reports") {
    const auto dir = support::scratch_dir("cli_exp");
    const auto r = run("experiment --config " + config("pa.json") +
                       " --evaluator surrogate-pa --runs 4 --trials 12 --workers 2 --out " + dir.string());
    REQUIRE(r.status == 0);
    CHECK(field(r.out, "optimal_score") == format_double(*parse_double(field(r.out, "optimal_score"))));
    for (const char* name : {"summary.csv", "traces.csv", "front.csv", "score_vs_trials.svg"})
        CHECK(std::filesystem::exists(dir / name));
    std::ifstream in(dir / "summary.csv");
    CHECK(read_summary_csv(in).rows.size() == 12);
    std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes") {
    const auto dir = support::scratch_dir("cli_exit");
    CHECK(run("").status == 1);
    CHECK(run("enumerate").status == 1);
    CHECK(run("enumerate --config " + (dir / "absent.json").string()).status == 1);
    CHECK(run("frobnicate --config " + config("pa.json")).status == 1);
    CHECK(run("sweep --config " + config("pa.json") + " --out " + dir.string()).status == 1);
    CHECK(run("sweep --config " + config("pa.json") + " --evaluator surrogate-nope --out " + dir.string()).status == 1);
    CHECK(run("optimize --config " + config("pa.json") + " --evaluator surrogate-pa --workers 0").status == 1);

    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"parameters": [], "operating": {"name": "V_GS", "values": [0]}, "unexpected": 1})";
    }
    CHECK(run("enumerate --config " + (dir / "bad.json").string()).status == 1);

    // Runtime failures other than bad input.
    CHECK(run("sweep --config " + config("pa.json") + " --evaluator exec:false --out " + dir.string()).status == 2);
    {
        std::ofstream blocker(dir / "blocker");
        blocker << "x";
    }
    CHECK(run("enumerate --config " + config("pa.json") + " --out " + (dir / "blocker" / "sub").string()).status == 2);
    std::filesystem::remove_all(dir);
}
