#include "rpd/objectives.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_fields.hpp"
#include "rpd/errors.hpp"

namespace rpd {

const char* to_string(Direction direction) {
    return direction == Direction::Maximize ? "maximize" : "minimize";
}

const char* to_string(Comparator comparator) {
    return comparator == Comparator::LessThan ? "lt" : "gt";
}

double phi_component(double value, const ObjectiveSpec& spec) {
    if (std::isnan(value)) return kInfinity;
    const double T = spec.target;
    const double L = spec.limit;
    const double P = spec.priority;
    if (spec.direction == Direction::Minimize) {
        if (value <= T) return 0.0;
        if (value <= L) return P * (value - T) / (L - T);
        return kInfinity;
    }
    if (value >= T) return 0.0;
    if (value >= L) return P * (T - value) / (T - L);
    return kInfinity;
}

double scalarize(const ObjectiveVector& vector, std::span<const ObjectiveSpec> specs) {
    double total = 0.0;
    for (const auto& spec : specs) {
        auto it = vector.values.find(spec.name);
        if (it == vector.values.end()) {
            throw std::out_of_range("objective vector has no metric '" + spec.name + "'");
        }
        total += phi_component(it->second, spec);
    }
    if (!vector.feasible) return kInfinity;
    return total;
}

void validate_specs(std::span<const ObjectiveSpec> specs) {
    std::ostringstream problems;
    std::set<std::string> seen;
    for (const auto& s : specs) {
        const std::string who = s.name.empty() ? std::string("<unnamed>") : s.name;
        if (s.name.empty()) problems << "\n  objective name must not be empty";
        if (!seen.insert(s.name).second) problems << "\n  " << who << ": duplicate objective name";
        if (!std::isfinite(s.target) || !std::isfinite(s.limit)) {
            problems << "\n  " << who << ": target and limit must be finite";
        } else if (s.direction == Direction::Minimize && !(s.target <= s.limit)) {
            problems << "\n  " << who << ": minimize requires target <= limit";
        } else if (s.direction == Direction::Maximize && !(s.limit <= s.target)) {
            problems << "\n  " << who << ": maximize requires limit <= target";
        }
        if (!(s.priority > 0.0) || !std::isfinite(s.priority)) {
            problems << "\n  " << who << ": priority must be a positive finite number";
        }
    }
    auto text = problems.str();
    if (!text.empty()) throw ValidationError("invalid objectives:" + text);
}

void validate_constraints(std::span<const ConstraintSpec> constraints) {
    for (const auto& c : constraints) {
        if (c.name.empty()) throw ValidationError("constraint name must not be empty");
        if (!std::isfinite(c.threshold)) {
            throw ValidationError("constraint " + c.name + ": threshold must be finite");
        }
    }
}

std::vector<ObjectiveSpec> objectives_from_json(const nlohmann::json& config) {
    using namespace detail;
    require_object(config, "config");
    std::vector<ObjectiveSpec> specs;
    const auto& arr = require_array(require_field(config, "", "objectives"), "objectives");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = index_path("objectives", i);
        const auto& o = require_object(arr[i], path);
        reject_unknown_keys(o, path, {"name", "direction", "target", "limit", "priority"});
        ObjectiveSpec s;
        s.name = require_string(o, path, "name");
        auto dir = require_string(o, path, "direction");
        if (dir == "minimize") {
            s.direction = Direction::Minimize;
        } else if (dir == "maximize") {
            s.direction = Direction::Maximize;
        } else {
            throw ParseError(field_path(path, "direction") + ": expected minimize or maximize");
        }
        s.target = require_number(o, path, "target");
        s.limit = require_number(o, path, "limit");
        s.priority = require_number(o, path, "priority");
        specs.push_back(std::move(s));
    }
    validate_specs(specs);
    return specs;
}

std::vector<ConstraintSpec> constraints_from_json(const nlohmann::json& config) {
    using namespace detail;
    require_object(config, "config");
    std::vector<ConstraintSpec> out;
    auto it = config.find("constraints");
    if (it == config.end()) return out;
    const auto& arr = require_array(*it, "constraints");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = index_path("constraints", i);
        const auto& o = require_object(arr[i], path);
        reject_unknown_keys(o, path, {"name", "comparator", "threshold"});
        ConstraintSpec c;
        c.name = require_string(o, path, "name");
        auto cmp = require_string(o, path, "comparator");
        if (cmp == "lt") {
            c.comparator = Comparator::LessThan;
        } else if (cmp == "gt") {
            c.comparator = Comparator::GreaterThan;
        } else {
            throw ParseError(field_path(path, "comparator") + ": expected \"lt\" or \"gt\"");
        }
        c.threshold = require_number(o, path, "threshold");
        out.push_back(std::move(c));
    }
    validate_constraints(out);
    return out;
}

}  // namespace rpd
