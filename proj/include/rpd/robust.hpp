#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rpd/design_space.hpp"
#include "rpd/objectives.hpp"

namespace rpd {

using MetricSet = std::map<std::string, double>;

/// Metrics of one design at one operating-grid value.
struct EvaluationRecord {
    DesignPoint design;
    double operating_value = 0.0;
    MetricSet metrics;
};

struct RobustSummary {
    DesignPoint design;
    ObjectiveVector worst_case;  // worst_case.feasible == feasible
    MetricSet constraint_worst;
    bool feasible = true;
};

/**
 * Per-objective worst case over the operating grid.
 *
 * Minimized objectives take the max over records, maximized ones the min;
 * each objective is reduced independently. Less-than constraints take the
 * max, greater-than constraints the min, and the design is feasible iff
 * every constraint holds at its worst value.
 *
 * Throws ValidationError unless the records come from a single design and
 * cover every operating value exactly once, or if a metric is missing.
 */
RobustSummary worst_case(std::span<const EvaluationRecord> records, const OperatingGrid& grid,
                         std::span<const ObjectiveSpec> objectives,
                         std::span<const ConstraintSpec> constraints);

// One summary per design group, in input order. Infeasible designs are kept
// with feasible == false.
std::vector<RobustSummary> robustify_all(std::span<const std::vector<EvaluationRecord>> groups,
                                         const OperatingGrid& grid,
                                         std::span<const ObjectiveSpec> objectives,
                                         std::span<const ConstraintSpec> constraints);

}  // namespace rpd
