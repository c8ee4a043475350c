#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rpd/objectives.hpp"
#include "rpd/robust.hpp"

namespace rpd {

struct FrontResult {
    std::vector<RobustSummary> optimal;
    std::vector<RobustSummary> dominated;
    // Input positions of the members above, ascending.
    std::vector<std::size_t> optimal_index;
    std::vector<std::size_t> dominated_index;
    std::size_t infeasible = 0;
};

// True iff a is no worse than b in every objective and strictly better in
// one, comparing in the minimized convention. Throws std::out_of_range if
// either vector lacks a spec name.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, std::span<const ObjectiveSpec> specs);

// Non-dominated mask over rows of minimized objective values.
std::vector<bool> nondominated_mask(std::span<const std::vector<double>> minimized_rows);

// Partition of the feasible summaries; infeasible ones are only counted.
// Equal objective vectors never dominate each other, so all copies stay optimal.
FrontResult pareto_front(std::span<const RobustSummary> summaries, std::span<const ObjectiveSpec> specs);

}  // namespace rpd
