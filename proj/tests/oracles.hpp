// Test-side reference implementations. Kept deliberately naive and free of
// library helpers beyond plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rpd/design_space.hpp"
#include "rpd/objectives.hpp"
#include "rpd/robust.hpp"

namespace oracle {

inline const double inf = std::numeric_limits<double>::infinity();

// Relative closeness that also treats equal infinities as equal.
inline bool close(double a, double b, double rel = 1e-12) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline std::filesystem::path source_dir() { return RPD_SOURCE_DIR; }

// Penalty straight from the piecewise definition, both directions.
inline double phi(double u, rpd::Direction dir, double t, double l, double p) {
    if (dir == rpd::Direction::Minimize) {
        if (u <= t) return 0.0;
        if (u <= l) return p * (u - t) / (l - t);
        return inf;
    }
    if (u >= t) return 0.0;
    if (u >= l) return p * (t - u) / (t - l);
    return inf;
}

inline double score(const std::map<std::string, double>& values, bool feasible,
                    const std::vector<rpd::ObjectiveSpec>& specs) {
    if (!feasible) return inf;
    double total = 0.0;
    for (const auto& s : specs) total += phi(values.at(s.name), s.direction, s.target, s.limit, s.priority);
    return total;
}

// a dominates b over rows already in the minimized convention.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

// All-pairs non-dominated mask.
inline std::vector<bool> front_mask(const std::vector<std::vector<double>>& rows) {
    std::vector<bool> mask(rows.size(), true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (i != j && dominates(rows[j], rows[i])) {
                mask[i] = false;
                break;
            }
        }
    }
    return mask;
}

// Base-2 radical inverse of i: the first Sobol coordinate.
inline double radical_inverse(std::uint64_t i) {
    double result = 0.0;
    double f = 0.5;
    while (i) {
        if (i & 1) result += f;
        i >>= 1;
        f *= 0.5;
    }
    return result;
}

// Nearest of the listed grid values to x, larger value on ties.
inline double nearest_value(const std::vector<double>& grid, double x) {
    double best = grid.front();
    for (double g : grid) {
        const double d = std::fabs(g - x);
        const double bd = std::fabs(best - x);
        if (d < bd || (d == bd && g > best)) best = g;
    }
    return best;
}

inline std::vector<double> uniform_values(double lo, double hi, std::size_t count) {
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * double(i) / double(count - 1));
    return v;
}

// Worst value of one metric over a record set by plain scanning.
inline double scan_worst(const std::vector<rpd::EvaluationRecord>& records, const std::string& metric, bool take_max) {
    double w = take_max ? -inf : inf;
    for (const auto& r : records) {
        const double v = r.metrics.at(metric);
        w = take_max ? std::max(w, v) : std::min(w, v);
    }
    return w;
}

}  // namespace oracle
