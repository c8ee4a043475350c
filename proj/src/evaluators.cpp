#include "rpd/evaluators.hpp"

#include <algorithm>
#include <utility>

#include "rpd/errors.hpp"

namespace rpd {

std::vector<EvaluationRecord> sweep_design(Evaluator& evaluator, const DesignSpace& space,
                                           const DesignPoint& design) {
    std::vector<EvaluationRecord> records;
    records.reserve(space.operating().size());
    for (double op : space.operating().values()) {
        records.push_back({design, op, evaluator.evaluate(design, op)});
    }
    return records;
}

RobustSummary robust_evaluate(Evaluator& evaluator, const DesignSpace& space, const DesignPoint& design,
                              std::span<const ObjectiveSpec> objectives,
                              std::span<const ConstraintSpec> constraints) {
    auto records = sweep_design(evaluator, space, design);
    return worst_case(records, space.operating(), objectives, constraints);
}

const char* to_string(EvaluatorError::Kind kind) {
    switch (kind) {
        case EvaluatorError::Kind::Domain: return "domain";
        case EvaluatorError::Kind::Timeout: return "timeout";
        case EvaluatorError::Kind::Malformed: return "malformed-response";
        case EvaluatorError::Kind::ChildExit: return "child-exit";
        case EvaluatorError::Kind::IdMismatch: return "id-mismatch";
        case EvaluatorError::Kind::MissingMetric: return "missing-metric";
        case EvaluatorError::Kind::ChildError: return "child-error";
        case EvaluatorError::Kind::Spawn: return "spawn";
        case EvaluatorError::Kind::Lookup: return "lookup";
    }
    return "unknown";
}

EvaluatorFactory::EvaluatorFactory(std::string_view selector, const DesignSpace& space,
                                   std::vector<std::string> required_metrics)
    : selector_(selector), space_(space) {
    if (selector == "surrogate-pa") {
        type_ = Type::SurrogatePa;
        metric_names_ = SurrogateEvaluator::metric_names(SurrogateModel::PowerAmplifier);
        SurrogateEvaluator probe(SurrogateModel::PowerAmplifier, space);
    } else if (selector == "surrogate-lna") {
        type_ = Type::SurrogateLna;
        metric_names_ = SurrogateEvaluator::metric_names(SurrogateModel::LowNoiseAmplifier);
        SurrogateEvaluator probe(SurrogateModel::LowNoiseAmplifier, space);
    } else if (selector.starts_with("table:")) {
        type_ = Type::Table;
        argument_ = std::string(selector.substr(6));
        if (argument_.empty()) throw ValidationError("evaluator table: needs a path");
        table_ = std::make_shared<const EvaluationTable>(EvaluationTable::load(argument_, space));
        metric_names_ = table_->metric_names();
    } else if (selector.starts_with("exec:")) {
        type_ = Type::Exec;
        argument_ = std::string(selector.substr(5));
        if (argument_.empty()) throw ValidationError("evaluator exec: needs a command");
        metric_names_ = std::move(required_metrics);
        return;
    } else {
        throw ValidationError("unknown evaluator '" + std::string(selector) +
                              "' (expected surrogate-pa, surrogate-lna, table:<path> or exec:<command>)");
    }
    for (const auto& name : required_metrics) {
        if (std::find(metric_names_.begin(), metric_names_.end(), name) == metric_names_.end()) {
            throw ValidationError("evaluator " + selector_ + " does not produce metric '" + name + "'");
        }
    }
}

std::unique_ptr<Evaluator> EvaluatorFactory::make() const {
    switch (type_) {
        case Type::SurrogatePa:
            return std::make_unique<SurrogateEvaluator>(SurrogateModel::PowerAmplifier, space_);
        case Type::SurrogateLna:
            return std::make_unique<SurrogateEvaluator>(SurrogateModel::LowNoiseAmplifier, space_);
        case Type::Table:
            return std::make_unique<TableEvaluator>(table_);
        case Type::Exec: {
            SubprocessOptions options;
            options.command = argument_;
            options.required_metrics = metric_names_;
            return std::make_unique<SubprocessEvaluator>(std::move(options), space_);
        }
    }
    return nullptr;
}

}  // namespace rpd
