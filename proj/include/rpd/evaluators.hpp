#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpd/design_space.hpp"
#include "rpd/robust.hpp"

namespace rpd {

class EvaluatorError : public std::runtime_error {
public:
    enum class Kind {
        Domain,         // input outside the evaluator's domain
        Timeout,        // child did not answer in time
        Malformed,      // response line is not a valid protocol object
        ChildExit,      // child closed its pipe or exited
        IdMismatch,     // response id differs from the request id
        MissingMetric,  // response lacks a required metric
        ChildError,     // child answered with {"error": ...}
        Spawn,          // could not start the child
        Lookup,         // table has no row for the key
    };

    EvaluatorError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

const char* to_string(EvaluatorError::Kind kind);

/// Black-box metric source for one (design, operating value) pair.
/// Instances are single-owner; build one per worker thread.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual MetricSet evaluate(const DesignPoint& design, double operating_value) = 0;
};

// Evaluates every operating value of the grid for one design.
std::vector<EvaluationRecord> sweep_design(Evaluator& evaluator, const DesignSpace& space,
                                           const DesignPoint& design);

// sweep_design followed by worst_case.
RobustSummary robust_evaluate(Evaluator& evaluator, const DesignSpace& space, const DesignPoint& design,
                              std::span<const ObjectiveSpec> objectives,
                              std::span<const ConstraintSpec> constraints);

// ---------------------------------------------------------------------------
// Analytic surrogates

struct DeviceGeometry {
    double vds = 0.0;  // V
    double nf = 0.0;   // finger count
    double wf = 0.0;   // um
    double gdg = 0.0;  // um
    double gsg = 0.0;  // um
};

// PA surrogate: Pout_avg, PAE_avg, Tj_avg, Gain, ACPR. vgs in [-1.8, -1.2].
MetricSet surrogate_pa(const DeviceGeometry& design, double vgs);

// LNA surrogate: fmax, Gain, NFmin. vgs in [-1.6, -1.0].
MetricSet surrogate_lna(const DeviceGeometry& design, double vgs);

enum class SurrogateModel { PowerAmplifier, LowNoiseAmplifier };

/// Adapts a surrogate to a design space with parameters named V_DS, N_f,
/// W_f, GDG and GSG (any order).
class SurrogateEvaluator final : public Evaluator {
public:
    SurrogateEvaluator(SurrogateModel model, const DesignSpace& space);
    MetricSet evaluate(const DesignPoint& design, double operating_value) override;

    static std::vector<std::string> metric_names(SurrogateModel model);

private:
    SurrogateModel model_;
    std::size_t index_[5];
};

// ---------------------------------------------------------------------------
// Table-backed evaluation

/// Complete lookup over design grid x operating grid, loaded from CSV.
class EvaluationTable {
public:
    // Throws ParseError on malformed text, unknown columns, duplicate rows or
    // missing keys. If expected_metrics is non-empty, every metric column
    // must be named there and every name there must have a column.
    static EvaluationTable load(const std::filesystem::path& csv_path, const DesignSpace& space,
                                std::span<const std::string> expected_metrics = {});
    static EvaluationTable parse(std::istream& in, const DesignSpace& space,
                                 std::span<const std::string> expected_metrics = {},
                                 std::string provenance = "stream");

    const MetricSet& lookup(const DesignPoint& design, double operating_value) const;
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& metric_names() const { return metric_names_; }
    const std::string& provenance() const { return provenance_; }

private:
    EvaluationTable(const DesignSpace& space) : space_(space) {}

    DesignSpace space_;
    std::vector<std::string> metric_names_;
    std::unordered_map<std::uint64_t, MetricSet> rows_;
    std::string provenance_;
};

class TableEvaluator final : public Evaluator {
public:
    explicit TableEvaluator(std::shared_ptr<const EvaluationTable> table) : table_(std::move(table)) {}
    MetricSet evaluate(const DesignPoint& design, double operating_value) override;

private:
    std::shared_ptr<const EvaluationTable> table_;
};

// Writes the table CSV for the full grid in enumerate_grid order, operating
// values innermost. Floats use the shortest round-trip representation.
void write_table(std::ostream& out, const DesignSpace& space, std::span<const EvaluationRecord> records,
                 std::span<const std::string> metric_names);

// ---------------------------------------------------------------------------
// External simulator over a newline-delimited JSON pipe

struct SubprocessOptions {
    std::string command;  // run via /bin/sh -c
    std::chrono::milliseconds timeout{300'000};
    bool fresh_child_per_request = false;
    std::vector<std::string> required_metrics;
};

/**
 * Talks to a child process, one JSON object per line.
 *
 *   request : {"id": n, "design": {name: x, ...}, "operating": {name: v}}
 *   response: {"id": n, "metrics": {name: x, ...}}  or  {"id": n, "error": "..."}
 *
 * The child is started lazily and reused across requests unless
 * fresh_child_per_request is set. After a timeout or protocol failure the
 * child is killed and the next request starts a new one.
 */
class SubprocessEvaluator final : public Evaluator {
public:
    SubprocessEvaluator(SubprocessOptions options, const DesignSpace& space);
    ~SubprocessEvaluator() override;
    SubprocessEvaluator(const SubprocessEvaluator&) = delete;
    SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

    MetricSet evaluate(const DesignPoint& design, double operating_value) override;

    std::uint64_t requests_sent() const { return next_id_; }

private:
    void start();
    void stop(bool force);
    std::string read_line();

    SubprocessOptions options_;
    DesignSpace space_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::uint64_t next_id_ = 0;
};

// ---------------------------------------------------------------------------

/// Builds evaluators from a selector: surrogate-pa, surrogate-lna,
/// table:<path> or exec:<command>. Tables are loaded once and shared.
class EvaluatorFactory {
public:
    EvaluatorFactory(std::string_view selector, const DesignSpace& space,
                     std::vector<std::string> required_metrics);

    std::unique_ptr<Evaluator> make() const;
    const std::string& selector() const { return selector_; }

    // Metric columns a sweep with this evaluator writes.
    const std::vector<std::string>& metric_names() const { return metric_names_; }

private:
    enum class Type { SurrogatePa, SurrogateLna, Table, Exec };
    Type type_;
    std::string selector_;
    std::string argument_;
    DesignSpace space_;
    std::vector<std::string> metric_names_;
    std::shared_ptr<const EvaluationTable> table_;
};

}  // namespace rpd
