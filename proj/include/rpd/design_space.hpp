#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rpd {

enum class ParameterKind { GriddedFloat, EvenInteger };

/**
 * ParameterSpec: one gridded design variable.
 *
 * The value list is `count` uniformly spaced points from min to max
 * inclusive. The point count is authoritative; no step is stored.
 */
class ParameterSpec {
public:
    ParameterSpec(std::string name, ParameterKind kind, double min, double max, std::size_t count);

    const std::string& name() const { return name_; }
    ParameterKind kind() const { return kind_; }
    double min() const { return min_; }
    double max() const { return max_; }
    std::size_t count() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    // Unit coordinate of grid index i, i / (count - 1).
    double unit_of(std::size_t index) const;

    // Grid index of a value, if it is a member of the value list.
    std::optional<std::size_t> index_of(double value) const;

private:
    std::string name_;
    ParameterKind kind_;
    double min_;
    double max_;
    std::vector<double> values_;
};

/// The operating-parameter grid the worst case is taken over (V_GS).
class OperatingGrid {
public:
    OperatingGrid(std::string name, std::vector<double> values);
    static OperatingGrid uniform(std::string name, double min, double max, std::size_t count);

    const std::string& name() const { return name_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    std::optional<std::size_t> index_of(double value) const;

private:
    std::string name_;
    std::vector<double> values_;
};

struct DesignPoint {
    std::vector<double> values;

    friend auto operator<=>(const DesignPoint&, const DesignPoint&) = default;
};

class DesignSpace {
public:
    DesignSpace(std::vector<ParameterSpec> parameters, OperatingGrid operating);

    std::span<const ParameterSpec> parameters() const { return parameters_; }
    const OperatingGrid& operating() const { return operating_; }
    std::size_t dimension() const { return parameters_.size(); }

    // Number of grid designs, the product of the per-parameter counts.
    std::uint64_t size() const { return size_; }

    std::optional<std::size_t> parameter_index(std::string_view name) const;

    bool contains(const DesignPoint& point) const;

    // Per-parameter grid indices; throws ValidationError if not a member.
    std::vector<std::size_t> indices_of(const DesignPoint& point) const;

    // Position in enumerate_grid order (first parameter most significant).
    std::uint64_t flat_index(const DesignPoint& point) const;
    DesignPoint at(std::uint64_t flat_index) const;

    std::vector<double> to_unit(const DesignPoint& point) const;

private:
    std::vector<ParameterSpec> parameters_;
    OperatingGrid operating_;
    std::uint64_t size_ = 1;
};

// Reads `parameters` and `operating` from a config document. The top-level
// key set is checked against the full schema, so unknown keys are rejected
// here even though objectives/constraints/engine are consumed elsewhere.
DesignSpace parse_space(std::string_view config_text);
DesignSpace space_from_json(const nlohmann::json& config);

// Full Cartesian product in lexicographic order of parameter declaration.
std::vector<DesignPoint> enumerate_grid(const DesignSpace& space);

// Maps a point of [0,1]^a onto the nearest grid design; midpoints round up.
DesignPoint snap(const DesignSpace& space, std::span<const double> unit_vector);

const char* to_string(ParameterKind kind);

}  // namespace rpd
