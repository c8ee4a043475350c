#include "rpd/pareto.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rpd {

namespace {

bool row_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        strictly = strictly || a[i] < b[i];
    }
    return strictly;
}

std::vector<double> minimized_row(const ObjectiveVector& v, std::span<const ObjectiveSpec> specs) {
    std::vector<double> row;
    row.reserve(specs.size());
    for (const auto& s : specs) {
        auto it = v.values.find(s.name);
        if (it == v.values.end()) throw std::out_of_range("objective vector has no metric '" + s.name + "'");
        row.push_back(minimized(it->second, s.direction));
    }
    return row;
}

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, std::span<const ObjectiveSpec> specs) {
    return row_dominates(minimized_row(a, specs), minimized_row(b, specs));
}

std::vector<bool> nondominated_mask(std::span<const std::vector<double>> rows) {
    // A dominator always precedes the point it dominates in lexicographic
    // order, and by transitivity some front member dominates every
    // dominated point, so each point only needs checking against the front
    // built so far.
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a] < rows[b]; });

    std::vector<bool> mask(rows.size(), false);
    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        bool dominated = std::any_of(front.begin(), front.end(),
                                     [&](std::size_t f) { return row_dominates(rows[f], rows[idx]); });
        if (!dominated) {
            front.push_back(idx);
            mask[idx] = true;
        }
    }
    return mask;
}

FrontResult pareto_front(std::span<const RobustSummary> summaries, std::span<const ObjectiveSpec> specs) {
    FrontResult out;
    std::vector<std::size_t> feasible;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        if (!summaries[i].feasible) {
            ++out.infeasible;
            continue;
        }
        feasible.push_back(i);
        rows.push_back(minimized_row(summaries[i].worst_case, specs));
    }
    auto mask = nondominated_mask(rows);
    for (std::size_t j = 0; j < feasible.size(); ++j) {
        const std::size_t i = feasible[j];
        if (mask[j]) {
            out.optimal.push_back(summaries[i]);
            out.optimal_index.push_back(i);
        } else {
            out.dominated.push_back(summaries[i]);
            out.dominated_index.push_back(i);
        }
    }
    return out;
}

}  // namespace rpd
