#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rpd/errors.hpp"
#include "rpd/experiment.hpp"
#include "rpd/number_format.hpp"

namespace rpd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

double number_at(const std::vector<std::string>& fields, std::size_t i, std::size_t line_no) {
    auto v = parse_double(fields.at(i));
    if (!v) throw ParseError("line " + std::to_string(line_no) + ": malformed number '" + fields[i] + "'");
    return *v;
}

std::size_t count_at(const std::vector<std::string>& fields, std::size_t i, std::size_t line_no) {
    double v = number_at(fields, i, line_no);
    if (v < 0 || v != std::floor(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": expected a count, got '" + fields[i] + "'");
    }
    return static_cast<std::size_t>(v);
}

void expect_header(std::istream& in, const std::vector<std::string>& want, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(std::string(what) + ": empty file");
    if (split_line(line) != want) throw ParseError(std::string(what) + ": unexpected header '" + line + "'");
}

}  // namespace

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    out << "n,mean_score_star,std_score_star,frac_within_tol,optimal_score\n";
    for (const auto& row : report.rows) {
        out << row.n << "," << format_double(row.mean_score_star) << "," << format_double(row.std_score_star) << ","
            << format_double(row.frac_within_tol) << "," << format_double(report.optimal_score) << "\n";
    }
}

ExperimentReport read_summary_csv(std::istream& in) {
    expect_header(in, {"n", "mean_score_star", "std_score_star", "frac_within_tol", "optimal_score"}, "summary.csv");
    ExperimentReport report;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_line(line);
        if (f.size() != 5) throw ParseError("summary.csv line " + std::to_string(line_no) + ": expected 5 fields");
        ExperimentRow row;
        row.n = count_at(f, 0, line_no);
        row.mean_score_star = number_at(f, 1, line_no);
        row.std_score_star = number_at(f, 2, line_no);
        row.frac_within_tol = number_at(f, 3, line_no);
        report.optimal_score = number_at(f, 4, line_no);
        report.rows.push_back(row);
    }
    return report;
}

void write_traces_csv(std::ostream& out, const ExperimentReport& report) {
    out << "run,n,score_star\n";
    for (std::size_t r = 0; r < report.traces.size(); ++r) {
        for (std::size_t n = 0; n < report.traces[r].size(); ++n) {
            out << r << "," << (n + 1) << "," << format_double(report.traces[r][n]) << "\n";
        }
    }
}

std::vector<std::vector<double>> read_traces_csv(std::istream& in) {
    expect_header(in, {"run", "n", "score_star"}, "traces.csv");
    std::vector<std::vector<double>> traces;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_line(line);
        if (f.size() != 3) throw ParseError("traces.csv line " + std::to_string(line_no) + ": expected 3 fields");
        const auto run = count_at(f, 0, line_no);
        const auto n = count_at(f, 1, line_no);
        if (run >= traces.size()) traces.resize(run + 1);
        if (n != traces[run].size() + 1) {
            throw ParseError("traces.csv line " + std::to_string(line_no) + ": trials out of order");
        }
        traces[run].push_back(number_at(f, 2, line_no));
    }
    return traces;
}

void write_front_csv(std::ostream& out, const ParetoStudy& study) {
    for (const auto& p : study.space.parameters()) out << p.name() << ",";
    for (const auto& o : study.objectives) out << o.name << ",";
    out << "feasible,pareto\n";
    std::vector<bool> optimal(study.summaries.size(), false);
    for (auto i : study.front.optimal_index) optimal[i] = true;
    for (std::size_t i = 0; i < study.summaries.size(); ++i) {
        const auto& s = study.summaries[i];
        for (double v : s.design.values) out << format_double(v) << ",";
        for (const auto& o : study.objectives) out << format_double(s.worst_case.values.at(o.name)) << ",";
        out << (s.feasible ? 1 : 0) << "," << (optimal[i] ? 1 : 0) << "\n";
    }
}

std::vector<FrontRow> read_front_csv(std::istream& in, const DesignSpace& space,
                                     std::span<const ObjectiveSpec> objectives) {
    std::vector<std::string> header;
    for (const auto& p : space.parameters()) header.push_back(p.name());
    for (const auto& o : objectives) header.push_back(o.name);
    header.emplace_back("feasible");
    header.emplace_back("pareto");
    expect_header(in, header, "front.csv");

    const std::size_t a = space.dimension();
    std::vector<FrontRow> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_line(line);
        if (f.size() != header.size()) {
            throw ParseError("front.csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        }
        FrontRow row;
        for (std::size_t i = 0; i < a; ++i) row.design.values.push_back(number_at(f, i, line_no));
        for (std::size_t i = 0; i < objectives.size(); ++i) row.objectives.push_back(number_at(f, a + i, line_no));
        row.feasible = count_at(f, header.size() - 2, line_no) != 0;
        row.pareto = count_at(f, header.size() - 1, line_no) != 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_robust_csv(std::ostream& out, const DesignSpace& space, std::span<const ObjectiveSpec> objectives,
                      std::span<const ConstraintSpec> constraints, std::span<const RobustSummary> summaries) {
    for (const auto& p : space.parameters()) out << p.name() << ",";
    for (const auto& o : objectives) out << o.name << ",";
    for (const auto& c : constraints) out << c.name << ",";
    out << "feasible\n";
    for (const auto& s : summaries) {
        for (double v : s.design.values) out << format_double(v) << ",";
        for (const auto& o : objectives) out << format_double(s.worst_case.values.at(o.name)) << ",";
        for (const auto& c : constraints) out << format_double(s.constraint_worst.at(c.name)) << ",";
        out << (s.feasible ? 1 : 0) << "\n";
    }
}

void write_score_svg(std::ostream& out, const ExperimentReport& report) {
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 20, B = 40;
    const std::size_t trials = report.rows.size();
    double ymax = 0.0;
    for (const auto& r : report.rows) {
        if (std::isfinite(r.mean_score_star + r.std_score_star)) ymax = std::max(ymax, r.mean_score_star + r.std_score_star);
    }
    if (std::isfinite(report.optimal_score)) ymax = std::max(ymax, report.optimal_score);
    if (ymax <= 0.0) ymax = 1.0;
    auto x_of = [&](double n) { return L + (W - L - R) * (trials > 1 ? (n - 1) / double(trials - 1) : 0.5); };
    auto y_of = [&](double y) {
        if (!std::isfinite(y)) y = ymax;
        return T + (H - T - B) * (1.0 - std::clamp(y, 0.0, ymax) / ymax);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.5\" points=\"";
    for (const auto& r : report.rows) out << x_of(double(r.n)) << "," << y_of(r.mean_score_star + r.std_score_star) << " ";
    for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
        out << x_of(double(it->n)) << "," << y_of(std::max(0.0, it->mean_score_star - it->std_score_star)) << " ";
    }
    out << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (const auto& r : report.rows) out << x_of(double(r.n)) << "," << y_of(r.mean_score_star) << " ";
    out << "\"/>\n";
    if (std::isfinite(report.optimal_score)) {
        out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << y_of(report.optimal_score) << "\" y2=\""
            << y_of(report.optimal_score) << "\" stroke=\"#cb181d\" stroke-dasharray=\"6,4\"/>\n";
    }
    out << "<line x1=\"" << L << "\" x2=\"" << L << "\" y1=\"" << T << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << H - B << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (W + L) / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\" font-size=\"12\">trials</text>\n";
    out << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
        << ")\" text-anchor=\"middle\">mean Score*</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_double(ymax) << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 14 << "\" text-anchor=\"end\" font-size=\"10\">" << trials
        << "</text>\n";
    out << "</svg>\n";
}

namespace {

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir,
                                               const ParetoStudy* study, bool write_svg) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    written.push_back(write_file(out_dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); }));
    written.push_back(write_file(out_dir / "traces.csv", [&](std::ostream& o) { write_traces_csv(o, report); }));
    if (study) {
        written.push_back(write_file(out_dir / "front.csv", [&](std::ostream& o) { write_front_csv(o, *study); }));
    }
    if (write_svg) {
        written.push_back(
            write_file(out_dir / "score_vs_trials.svg", [&](std::ostream& o) { write_score_svg(o, report); }));
    }
    return written;
}

}  // namespace rpd
