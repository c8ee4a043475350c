#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rpd/experiment.hpp"
#include "rpd/pareto.hpp"
#include "support.hpp"

using namespace rpd;

namespace {

std::vector<ObjectiveSpec> min_specs(std::size_t k) {
    std::vector<ObjectiveSpec> s;
    for (std::size_t i = 0; i < k; ++i) s.push_back({"o" + std::to_string(i), Direction::Minimize, 0, 1e9, 1});
    return s;
}

RobustSummary summary_of(const std::vector<double>& values, const std::vector<ObjectiveSpec>& specs,
                         bool feasible = true, double tag = 0) {
    RobustSummary s;
    s.design = DesignPoint{{tag}};
    for (std::size_t i = 0; i < values.size(); ++i) s.worst_case.values[specs[i].name] = values[i];
    s.worst_case.feasible = feasible;
    s.feasible = feasible;
    return s;
}

std::vector<std::vector<double>> minimized_rows(const std::vector<RobustSummary>& summaries,
                                                const std::vector<ObjectiveSpec>& specs) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : summaries) {
        std::vector<double> r;
        for (const auto& sp : specs) {
            const double v = s.worst_case.values.at(sp.name);
            r.push_back(sp.direction == Direction::Minimize ? v : -v);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("dominates examples") {
    const auto specs = min_specs(2);
    auto v = [&](double a, double b) { return summary_of({a, b}, specs).worst_case; };
    CHECK(dominates(v(1, 2), v(2, 3), specs));
    CHECK_FALSE(dominates(v(2, 3), v(1, 2), specs));
    CHECK_FALSE(dominates(v(1, 2), v(1, 2), specs));
    CHECK_FALSE(dominates(v(1, 3), v(2, 2), specs));
    CHECK_FALSE(dominates(v(2, 2), v(1, 3), specs));

    std::vector<ObjectiveSpec> mixed{{"o0", Direction::Maximize, 10, 0, 1}, {"o1", Direction::Minimize, 0, 10, 1}};
    CHECK(dominates(v(3, 1), v(2, 1), mixed));

    ObjectiveVector other{{{"o0", 1}, {"x", 2}}, true};
    CHECK_THROWS_AS(dominates(v(1, 2), other, specs), std::out_of_range);
}

TEST_CASE("pareto_front small example") {
    const auto specs = min_specs(2);
    std::vector<RobustSummary> in{summary_of({1, 2}, specs, true, 0), summary_of({2, 1}, specs, true, 1),
                                  summary_of({2, 2}, specs, true, 2), summary_of({0, 0}, specs, false, 3)};
    const auto f = pareto_front(in, specs);
    CHECK(f.optimal_index == std::vector<std::size_t>{0, 1});
    CHECK(f.dominated_index == std::vector<std::size_t>{2});
    CHECK(f.infeasible == 1);
    REQUIRE(f.optimal.size() == 2);
    CHECK(f.optimal[0].design == in[0].design);
    CHECK(f.optimal[1].design == in[1].design);
}

TEST_CASE("duplicates are all optimal and a singleton is optimal") {
    const auto specs = min_specs(2);
    std::vector<RobustSummary> in{summary_of({1, 1}, specs, true, 0), summary_of({1, 1}, specs, true, 1),
                                  summary_of({2, 2}, specs, true, 2)};
    const auto f = pareto_front(in, specs);
    CHECK(f.optimal_index == std::vector<std::size_t>{0, 1});
    CHECK(pareto_front(std::vector<RobustSummary>{in[2]}, specs).optimal_index == std::vector<std::size_t>{0});
    CHECK(pareto_front(std::vector<RobustSummary>{}, specs).optimal.empty());
}

TEST_CASE("property: random instances match the all-pairs oracle") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + gen() % 3;
        const std::size_t n = 1 + gen() % 200;
        std::vector<ObjectiveSpec> specs;
        for (std::size_t i = 0; i < k; ++i) {
            specs.push_back(gen() % 2 ? ObjectiveSpec{"o" + std::to_string(i), Direction::Minimize, 0, 100, 1}
                                      : ObjectiveSpec{"o" + std::to_string(i), Direction::Maximize, 100, 0, 1});
        }
        std::vector<RobustSummary> in;
        const int levels = 3 + int(gen() % 20);  // coarse levels force ties and duplicates
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v;
            for (std::size_t j = 0; j < k; ++j) v.push_back(double(gen() % levels));
            in.push_back(summary_of(v, specs, gen() % 10 != 0, double(i)));
        }
        const auto f = pareto_front(in, specs);

        std::vector<RobustSummary> feasible;
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < n; ++i) {
            if (in[i].feasible) {
                feasible.push_back(in[i]);
                positions.push_back(i);
            }
        }
        const auto rows = minimized_rows(feasible, specs);
        const auto mask = oracle::front_mask(rows);
        std::vector<std::size_t> opt, dom;
        for (std::size_t i = 0; i < mask.size(); ++i) (mask[i] ? opt : dom).push_back(positions[i]);
        CHECK(f.optimal_index == opt);
        CHECK(f.dominated_index == dom);
        CHECK(f.infeasible == n - feasible.size());

        // Every dominated member has a dominator on the front.
        for (const auto& d : f.dominated) {
            bool found = false;
            for (const auto& o : f.optimal) found = found || dominates(o.worst_case, d.worst_case, specs);
            CHECK(found);
        }
        // Idempotence.
        CHECK(pareto_front(f.optimal, specs).optimal.size() == f.optimal.size());

        // Strictly increasing transforms of minimized columns keep the partition.
        auto transformed = feasible;
        for (auto& s : transformed) {
            for (const auto& sp : specs) {
                double& v = s.worst_case.values[sp.name];
                v = sp.direction == Direction::Minimize ? std::exp(v / 5.0) + 3.0 * v : -std::exp(-v / 5.0) + 3.0 * v;
            }
        }
        const auto ft = pareto_front(transformed, specs);
        std::vector<std::size_t> opt_local;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) opt_local.push_back(i);
        CHECK(ft.optimal_index == opt_local);
    }
}

TEST_CASE("nondominated_mask matches the oracle on continuous data") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<double>> rows(1 + gen() % 300, std::vector<double>(2 + gen() % 3));
        for (auto& r : rows)
            for (auto& x : r) x = u(gen);
        CHECK(nondominated_mask(rows) == oracle::front_mask(rows));
    }
}

TEST_CASE("PA surrogate front verified against the oracle") {
    const auto problem = support::pa_problem();
    EvaluatorFactory factory("surrogate-pa", problem.space, problem.required_metrics());
    const auto scan = exhaustive_scan(problem.space, factory, problem.objectives, problem.constraints);
    const auto f = pareto_front(scan.summaries, problem.objectives);
    CHECK_FALSE(f.optimal.empty());

    std::vector<RobustSummary> feasible;
    for (const auto& s : scan.summaries)
        if (s.feasible) feasible.push_back(s);
    const auto rows = minimized_rows(feasible, problem.objectives);
    const auto mask = oracle::front_mask(rows);
    std::size_t n_opt = 0;
    for (bool m : mask) n_opt += m ? 1 : 0;
    CHECK(f.optimal.size() == n_opt);
    CHECK(f.dominated.size() == feasible.size() - n_opt);
    CHECK(f.infeasible == 672 - feasible.size());
    for (const auto& d : f.dominated) {
        bool found = false;
        for (const auto& o : f.optimal) found = found || dominates(o.worst_case, d.worst_case, problem.objectives);
        CHECK(found);
    }
}
