#include "rpd/evaluators.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "rpd/errors.hpp"
#include "rpd/number_format.hpp"

namespace rpd {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

std::string describe_key(const DesignSpace& space, const DesignPoint& d, double op) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        out << space.parameters()[i].name() << "=" << format_double(d.values[i]) << ", ";
    }
    out << space.operating().name() << "=" << format_double(op) << ")";
    return out.str();
}

}  // namespace

EvaluationTable EvaluationTable::load(const std::filesystem::path& csv_path, const DesignSpace& space,
                                      std::span<const std::string> expected_metrics) {
    std::ifstream in(csv_path);
    if (!in) throw ParseError("cannot open table " + csv_path.string());
    return parse(in, space, expected_metrics, csv_path.string());
}

EvaluationTable EvaluationTable::parse(std::istream& in, const DesignSpace& space,
                                       std::span<const std::string> expected_metrics, std::string provenance) {
    EvaluationTable table(space);
    table.provenance_ = std::move(provenance);
    const auto& where = table.provenance_;

    std::string line;
    if (!std::getline(in, line)) throw ParseError(where + ": empty table");
    std::vector<std::string> header;
    for (auto f : split_commas(line)) header.push_back(trim(f));

    const auto params = space.parameters();
    const std::size_t a = params.size();
    for (std::size_t i = 0; i <= a; ++i) {
        const std::string& want = i < a ? params[i].name() : space.operating().name();
        if (i >= header.size()) throw ParseError(where + ": header is missing column '" + want + "'");
        if (header[i] != want) {
            throw ParseError(where + ": unknown column '" + header[i] + "' at position " + std::to_string(i + 1) +
                             " (expected '" + want + "')");
        }
    }
    std::set<std::string> seen_metrics;
    for (std::size_t i = a + 1; i < header.size(); ++i) {
        const auto& name = header[i];
        if (name.empty()) throw ParseError(where + ": empty column name at position " + std::to_string(i + 1));
        if (!seen_metrics.insert(name).second) throw ParseError(where + ": duplicate column '" + name + "'");
        if (!expected_metrics.empty() &&
            std::find(expected_metrics.begin(), expected_metrics.end(), name) == expected_metrics.end()) {
            throw ParseError(where + ": unknown column '" + name + "'");
        }
        table.metric_names_.push_back(name);
    }
    for (const auto& name : expected_metrics) {
        if (!seen_metrics.count(name)) throw ParseError(where + ": missing metric column '" + name + "'");
    }

    const std::size_t n_ops = space.operating().size();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string at = where + ":" + std::to_string(line_no);
        auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw ParseError(at + ": expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        }
        std::vector<double> numbers(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto v = parse_double(fields[i]);
            if (!v) throw ParseError(at + ": malformed number '" + trim(fields[i]) + "' in column '" + header[i] + "'");
            numbers[i] = *v;
        }
        DesignPoint design{std::vector<double>(numbers.begin(), numbers.begin() + static_cast<long>(a))};
        const double op = numbers[a];
        std::uint64_t flat = 0;
        try {
            flat = space.flat_index(design);
        } catch (const ValidationError& e) {
            throw ParseError(at + ": " + e.what());
        }
        auto op_index = space.operating().index_of(op);
        if (!op_index) {
            throw ParseError(at + ": " + space.operating().name() + " = " + format_double(op) +
                             " is not on the operating grid");
        }
        const std::uint64_t key = flat * n_ops + *op_index;
        MetricSet metrics;
        for (std::size_t i = a + 1; i < header.size(); ++i) metrics[header[i]] = numbers[i];
        if (!table.rows_.emplace(key, std::move(metrics)).second) {
            throw ParseError(at + ": duplicate row for key " + describe_key(space, design, op));
        }
    }

    const std::uint64_t expected = space.size() * n_ops;
    if (table.rows_.size() != expected) {
        std::ostringstream msg;
        msg << where << ": table is missing " << (expected - table.rows_.size()) << " of " << expected
            << " keys:";
        std::size_t shown = 0;
        for (std::uint64_t key = 0; key < expected && shown < 10; ++key) {
            if (table.rows_.count(key)) continue;
            msg << "\n  " << describe_key(space, space.at(key / n_ops), space.operating().values()[key % n_ops]);
            ++shown;
        }
        throw ParseError(msg.str());
    }
    return table;
}

const MetricSet& EvaluationTable::lookup(const DesignPoint& design, double operating_value) const {
    auto op_index = space_.operating().index_of(operating_value);
    if (!op_index || !space_.contains(design)) {
        throw EvaluatorError(EvaluatorError::Kind::Lookup,
                             provenance_ + ": no row for " + describe_key(space_, design, operating_value));
    }
    const std::uint64_t key = space_.flat_index(design) * space_.operating().size() + *op_index;
    return rows_.at(key);
}

MetricSet TableEvaluator::evaluate(const DesignPoint& design, double operating_value) {
    return table_->lookup(design, operating_value);
}

void write_table(std::ostream& out, const DesignSpace& space, std::span<const EvaluationRecord> records,
                 std::span<const std::string> metric_names) {
    for (const auto& p : space.parameters()) out << p.name() << ",";
    out << space.operating().name();
    for (const auto& m : metric_names) out << "," << m;
    out << "\n";
    for (const auto& r : records) {
        for (double v : r.design.values) out << format_double(v) << ",";
        out << format_double(r.operating_value);
        for (const auto& m : metric_names) {
            auto it = r.metrics.find(m);
            if (it == r.metrics.end()) throw std::out_of_range("record has no metric '" + m + "'");
            out << "," << format_double(it->second);
        }
        out << "\n";
    }
}

}  // namespace rpd
