#include "rpd/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "json_fields.hpp"
#include "rpd/errors.hpp"

namespace rpd {

namespace {

// Relative tolerance for grid membership. Grid values are computed once and
// copied around, so members normally compare bit-equal; the slack only
// matters for values that went through text.
constexpr double kMemberTolerance = 1e-9;

bool is_even_integer(double x) {
    return x == std::floor(x) && std::fmod(std::fabs(x), 2.0) == 0.0;
}

std::optional<std::size_t> find_in_sorted(std::span<const double> values, double x) {
    if (values.empty() || !std::isfinite(x)) return std::nullopt;
    double span = values.back() - values.front();
    double tol = kMemberTolerance * std::max({std::fabs(span), std::fabs(values.front()),
                                               std::fabs(values.back()), 1.0});
    auto it = std::lower_bound(values.begin(), values.end(), x - tol);
    if (it != values.end() && std::fabs(*it - x) <= tol) {
        return static_cast<std::size_t>(it - values.begin());
    }
    return std::nullopt;
}

}  // namespace

const char* to_string(ParameterKind kind) {
    return kind == ParameterKind::EvenInteger ? "even-integer" : "gridded-float";
}

ParameterSpec::ParameterSpec(std::string name, ParameterKind kind, double min, double max,
                             std::size_t count)
    : name_(std::move(name)), kind_(kind), min_(min), max_(max) {
    if (name_.empty()) throw ValidationError("parameter name must not be empty");
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw ValidationError("parameter " + name_ + ": min and max must be finite");
    }
    if (!(min < max)) throw ValidationError("parameter " + name_ + ": min must be less than max");
    if (count < 2) throw ValidationError("parameter " + name_ + ": count must be at least 2");

    values_.resize(count);
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        values_[i] = min + static_cast<double>(i) * step;
    }
    values_.back() = max;

    if (kind == ParameterKind::EvenInteger) {
        if (!is_even_integer(min) || !is_even_integer(max)) {
            throw ValidationError("parameter " + name_ + ": even-integer bounds must be even integers");
        }
        for (double& v : values_) {
            double r = std::round(v);
            if (std::fabs(v - r) > 1e-9 || !is_even_integer(r)) {
                std::ostringstream msg;
                msg << "parameter " << name_ << ": uniform spacing of " << count
                    << " points produces non-even value " << v;
                throw ValidationError(msg.str());
            }
            v = r;
        }
    }
}

double ParameterSpec::unit_of(std::size_t index) const {
    return static_cast<double>(index) / static_cast<double>(values_.size() - 1);
}

std::optional<std::size_t> ParameterSpec::index_of(double value) const {
    return find_in_sorted(values_, value);
}

OperatingGrid::OperatingGrid(std::string name, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)) {
    if (name_.empty()) throw ValidationError("operating parameter name must not be empty");
    if (values_.empty()) throw ValidationError("operating grid " + name_ + " must not be empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError("operating grid " + name_ + ": values must be finite");
        }
        if (i > 0 && !(values_[i - 1] < values_[i])) {
            throw ValidationError("operating grid " + name_ + ": values must be strictly increasing");
        }
    }
}

OperatingGrid OperatingGrid::uniform(std::string name, double min, double max, std::size_t count) {
    if (count == 0) throw ValidationError("operating grid " + name + ": count must be positive");
    if (count == 1) return OperatingGrid(std::move(name), {min});
    if (!(min < max)) throw ValidationError("operating grid " + name + ": min must be less than max");
    std::vector<double> values(count);
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) values[i] = min + static_cast<double>(i) * step;
    values.back() = max;
    return OperatingGrid(std::move(name), std::move(values));
}

std::optional<std::size_t> OperatingGrid::index_of(double value) const {
    return find_in_sorted(values_, value);
}

DesignSpace::DesignSpace(std::vector<ParameterSpec> parameters, OperatingGrid operating)
    : parameters_(std::move(parameters)), operating_(std::move(operating)) {
    if (parameters_.empty()) throw ValidationError("design space needs at least one parameter");
    std::set<std::string> names;
    for (const auto& p : parameters_) {
        if (!names.insert(p.name()).second) {
            throw ValidationError("duplicate parameter name " + p.name());
        }
        if (p.name() == operating_.name()) {
            throw ValidationError("parameter " + p.name() + " collides with the operating parameter");
        }
        if (size_ > std::numeric_limits<std::uint64_t>::max() / p.count()) {
            throw ValidationError("design space cardinality overflows 64 bits");
        }
        size_ *= p.count();
    }
}

std::optional<std::size_t> DesignSpace::parameter_index(std::string_view name) const {
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        if (parameters_[i].name() == name) return i;
    }
    return std::nullopt;
}

bool DesignSpace::contains(const DesignPoint& point) const {
    if (point.values.size() != parameters_.size()) return false;
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        if (!parameters_[i].index_of(point.values[i])) return false;
    }
    return true;
}

std::vector<std::size_t> DesignSpace::indices_of(const DesignPoint& point) const {
    if (point.values.size() != parameters_.size()) {
        throw ValidationError("design point has " + std::to_string(point.values.size()) +
                              " values, space has " + std::to_string(parameters_.size()) +
                              " parameters");
    }
    std::vector<std::size_t> idx(parameters_.size());
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        auto k = parameters_[i].index_of(point.values[i]);
        if (!k) {
            std::ostringstream msg;
            msg << "value " << point.values[i] << " is not on the grid of parameter "
                << parameters_[i].name();
            throw ValidationError(msg.str());
        }
        idx[i] = *k;
    }
    return idx;
}

std::uint64_t DesignSpace::flat_index(const DesignPoint& point) const {
    auto idx = indices_of(point);
    std::uint64_t flat = 0;
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        flat = flat * parameters_[i].count() + idx[i];
    }
    return flat;
}

DesignPoint DesignSpace::at(std::uint64_t flat_index) const {
    if (flat_index >= size_) throw std::out_of_range("design index past the end of the grid");
    DesignPoint point;
    point.values.resize(parameters_.size());
    for (std::size_t i = parameters_.size(); i-- > 0;) {
        const auto& p = parameters_[i];
        point.values[i] = p.values()[flat_index % p.count()];
        flat_index /= p.count();
    }
    return point;
}

std::vector<double> DesignSpace::to_unit(const DesignPoint& point) const {
    auto idx = indices_of(point);
    std::vector<double> unit(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) unit[i] = parameters_[i].unit_of(idx[i]);
    return unit;
}

std::vector<DesignPoint> enumerate_grid(const DesignSpace& space) {
    std::vector<DesignPoint> out;
    out.reserve(static_cast<std::size_t>(space.size()));
    const auto params = space.parameters();
    std::vector<std::size_t> idx(params.size(), 0);
    for (std::uint64_t n = 0; n < space.size(); ++n) {
        DesignPoint p;
        p.values.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) p.values[i] = params[i].values()[idx[i]];
        out.push_back(std::move(p));
        // odometer, last parameter fastest
        for (std::size_t i = params.size(); i-- > 0;) {
            if (++idx[i] < params[i].count()) break;
            idx[i] = 0;
        }
    }
    return out;
}

DesignPoint snap(const DesignSpace& space, std::span<const double> unit_vector) {
    const auto params = space.parameters();
    if (unit_vector.size() != params.size()) {
        throw ValidationError("snap: vector has dimension " + std::to_string(unit_vector.size()) +
                              ", space has " + std::to_string(params.size()));
    }
    DesignPoint p;
    p.values.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        double t = unit_vector[i];
        if (std::isnan(t)) t = 0.0;
        t = std::clamp(t, 0.0, 1.0);
        // Position in grid-index units; the affine map is uniform, so the
        // nearest value is the nearest index.
        const auto last = static_cast<double>(params[i].count() - 1);
        auto k = static_cast<std::size_t>(std::floor(t * last + 0.5));
        k = std::min(k, params[i].count() - 1);
        p.values[i] = params[i].values()[k];
    }
    return p;
}

namespace {

ParameterKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "gridded-float" || s == "float") return ParameterKind::GriddedFloat;
    if (s == "even-integer") return ParameterKind::EvenInteger;
    throw ParseError(path + ": unknown kind '" + s + "' (expected gridded-float or even-integer)");
}

std::size_t parse_count(const nlohmann::json& obj, const std::string& path) {
    long long c = detail::require_integer(obj, path, "count");
    if (c < 1) throw ParseError(detail::field_path(path, "count") + ": expected a positive integer");
    return static_cast<std::size_t>(c);
}

}  // namespace

DesignSpace space_from_json(const nlohmann::json& config) {
    using namespace detail;
    require_object(config, "config");
    reject_unknown_keys(config, "", {"parameters", "operating", "objectives", "constraints", "engine"});

    const auto& params_json = require_array(require_field(config, "", "parameters"), "parameters");
    std::vector<ParameterSpec> params;
    for (std::size_t i = 0; i < params_json.size(); ++i) {
        const std::string path = index_path("parameters", i);
        const auto& p = require_object(params_json[i], path);
        reject_unknown_keys(p, path, {"name", "kind", "min", "max", "count"});
        auto name = require_string(p, path, "name");
        auto kind = parse_kind(require_string(p, path, "kind"), field_path(path, "kind"));
        double lo = require_number(p, path, "min");
        double hi = require_number(p, path, "max");
        std::size_t count = parse_count(p, path);
        params.emplace_back(std::move(name), kind, lo, hi, count);
    }

    const auto& op = require_object(require_field(config, "", "operating"), "operating");
    auto op_name = require_string(op, "operating", "name");
    if (op.contains("values")) {
        reject_unknown_keys(op, "operating", {"name", "values"});
        const auto& vals = require_array(op.at("values"), "operating.values");
        std::vector<double> values;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i].is_number()) throw ParseError(index_path("operating.values", i) + ": expected a number");
            values.push_back(vals[i].get<double>());
        }
        return DesignSpace(std::move(params), OperatingGrid(std::move(op_name), std::move(values)));
    }
    reject_unknown_keys(op, "operating", {"name", "min", "max", "count"});
    double lo = require_number(op, "operating", "min");
    double hi = require_number(op, "operating", "max");
    std::size_t count = parse_count(op, "operating");
    return DesignSpace(std::move(params), OperatingGrid::uniform(std::move(op_name), lo, hi, count));
}

DesignSpace parse_space(std::string_view config_text) {
    return space_from_json(detail::parse_document(config_text));
}

}  // namespace rpd
