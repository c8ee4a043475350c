#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rpd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Direction { Minimize, Maximize };

/// One objective with its target-priority-limit penalty parameters.
/// Minimize requires target <= limit; maximize requires limit <= target.
struct ObjectiveSpec {
    std::string name;
    Direction direction = Direction::Minimize;
    double target = 0.0;
    double limit = 0.0;
    double priority = 1.0;
};

enum class Comparator { LessThan, GreaterThan };

/// Feasibility rule on an evaluator metric, e.g. ACPR < -30.
struct ConstraintSpec {
    std::string name;
    Comparator comparator = Comparator::LessThan;
    double threshold = 0.0;

    bool satisfied_by(double value) const {
        return comparator == Comparator::LessThan ? value < threshold : value > threshold;
    }
};

/// Worst-case objective values for one design plus its feasibility.
struct ObjectiveVector {
    std::map<std::string, double> values;
    bool feasible = true;

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/**
 * Penalty of a single objective value.
 *
 * Minimize: 0 at or below the target, P (u - T) / (L - T) between target
 * and limit, +inf past the limit. Maximize mirrors this. The value at the
 * limit itself is P. NaN inputs score +inf.
 */
double phi_component(double value, const ObjectiveSpec& spec);

// Sum of phi_component over specs; +inf if the vector is infeasible or any
// term is infinite. Throws std::out_of_range if a spec name is missing.
double scalarize(const ObjectiveVector& vector, std::span<const ObjectiveSpec> specs);

// Throws ValidationError listing every violated rule.
void validate_specs(std::span<const ObjectiveSpec> specs);
void validate_constraints(std::span<const ConstraintSpec> constraints);

// Value in the minimized convention (maximize objectives negated).
inline double minimized(double value, Direction direction) {
    return direction == Direction::Maximize ? -value : value;
}

std::vector<ObjectiveSpec> objectives_from_json(const nlohmann::json& config);
std::vector<ConstraintSpec> constraints_from_json(const nlohmann::json& config);

const char* to_string(Direction direction);
const char* to_string(Comparator comparator);

}  // namespace rpd
