#include "rpd/robust.hpp"

#include <algorithm>
#include <sstream>

#include "rpd/errors.hpp"

namespace rpd {

namespace {

std::string describe(const DesignPoint& d) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < d.values.size(); ++i) out << (i ? ", " : "") << d.values[i];
    out << ")";
    return out.str();
}

double metric_of(const EvaluationRecord& r, const std::string& name) {
    auto it = r.metrics.find(name);
    if (it == r.metrics.end()) {
        std::ostringstream msg;
        msg << "record for design " << describe(r.design) << " at operating value "
            << r.operating_value << " has no metric '" << name << "'";
        throw ValidationError(msg.str());
    }
    return it->second;
}

}  // namespace

RobustSummary worst_case(std::span<const EvaluationRecord> records, const OperatingGrid& grid,
                         std::span<const ObjectiveSpec> objectives,
                         std::span<const ConstraintSpec> constraints) {
    if (records.empty()) throw ValidationError("worst_case: no evaluation records");

    const DesignPoint& design = records.front().design;
    std::vector<bool> covered(grid.size(), false);
    for (const auto& r : records) {
        if (r.design != design) {
            throw ValidationError("worst_case: records mix designs " + describe(design) + " and " +
                                  describe(r.design));
        }
        auto k = grid.index_of(r.operating_value);
        if (!k) {
            std::ostringstream msg;
            msg << "design " << describe(design) << ": operating value " << r.operating_value
                << " is not on the " << grid.name() << " grid";
            throw ValidationError(msg.str());
        }
        if (covered[*k]) {
            std::ostringstream msg;
            msg << "design " << describe(design) << ": duplicate record at " << grid.name() << " = "
                << grid.values()[*k];
            throw ValidationError(msg.str());
        }
        covered[*k] = true;
    }
    for (std::size_t k = 0; k < covered.size(); ++k) {
        if (!covered[k]) {
            std::ostringstream msg;
            msg << "design " << describe(design) << ": missing record at " << grid.name() << " = "
                << grid.values()[k];
            throw ValidationError(msg.str());
        }
    }

    RobustSummary out;
    out.design = design;
    for (const auto& spec : objectives) {
        double worst = metric_of(records.front(), spec.name);
        for (const auto& r : records.subspan(1)) {
            double v = metric_of(r, spec.name);
            worst = spec.direction == Direction::Minimize ? std::max(worst, v) : std::min(worst, v);
        }
        out.worst_case.values[spec.name] = worst;
    }
    bool feasible = true;
    for (const auto& c : constraints) {
        double worst = metric_of(records.front(), c.name);
        for (const auto& r : records.subspan(1)) {
            double v = metric_of(r, c.name);
            worst = c.comparator == Comparator::LessThan ? std::max(worst, v) : std::min(worst, v);
        }
        out.constraint_worst[c.name] = worst;
        feasible = feasible && c.satisfied_by(worst);
    }
    out.feasible = feasible;
    out.worst_case.feasible = feasible;
    return out;
}

std::vector<RobustSummary> robustify_all(std::span<const std::vector<EvaluationRecord>> groups,
                                         const OperatingGrid& grid,
                                         std::span<const ObjectiveSpec> objectives,
                                         std::span<const ConstraintSpec> constraints) {
    std::vector<RobustSummary> out;
    out.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        try {
            out.push_back(worst_case(groups[i], grid, objectives, constraints));
        } catch (const ValidationError& e) {
            throw ValidationError("design group " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace rpd
