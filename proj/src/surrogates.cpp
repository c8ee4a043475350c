#include "rpd/evaluators.hpp"

#include <cmath>
#include <sstream>

namespace rpd {

namespace {

constexpr double kSlack = 1e-9;

void check_range(const char* model, const char* what, double x, double lo, double hi) {
    if (!std::isfinite(x) || x < lo - kSlack || x > hi + kSlack) {
        std::ostringstream msg;
        msg << model << " surrogate: " << what << " = " << x << " outside [" << lo << ", " << hi << "]";
        throw EvaluatorError(EvaluatorError::Kind::Domain, msg.str());
    }
}

void check_geometry(const char* model, const DeviceGeometry& g, double vds_lo, double vds_hi) {
    check_range(model, "V_DS", g.vds, vds_lo, vds_hi);
    check_range(model, "N_f", g.nf, 2.0, 8.0);
    check_range(model, "W_f", g.wf, 25.0, 100.0);
    check_range(model, "GDG", g.gdg, 22.0, 52.0);
    check_range(model, "GSG", g.gsg, 33.0, 78.0);
}

double bump(double u) {
    const double t = 2.0 * u - 1.0;
    return 1.0 - t * t;
}

double square(double x) { return x * x; }

}  // namespace

MetricSet surrogate_pa(const DeviceGeometry& g, double vgs) {
    check_geometry("PA", g, 16.0, 28.0);
    check_range("PA", "V_GS", vgs, -1.8, -1.2);

    const double area = g.nf * g.wf;
    const double s = std::log2(area / 200.0);
    const double v = (g.vds - 16.0) / 12.0;
    const double u = (vgs + 1.8) / 0.6;
    const double d = (g.gdg - 22.0) / 30.0;
    const double gs = (g.gsg - 33.0) / 45.0;

    MetricSet m;
    m["Pout_avg"] = 20.0 + 3.0 * s + 2.5 * v + 1.2 * bump(u) - 0.6 * d - 0.3 * gs;
    m["PAE_avg"] = 34.0 - 4.0 * s - 6.0 * square(v - 0.4) - 8.0 * square(u - 0.6) + 1.5 * d;
    m["Tj_avg"] = 40.0 + 2.2 * g.vds + 12.0 * (area / 200.0) + 8.0 * u - 5.0 * d - 2.0 * gs;
    m["Gain"] = 12.0 - 1.2 * s - 2.0 * (g.wf - 25.0) / 75.0 - 1.0 * u;
    m["ACPR"] = -34.0 + 2.0 * s + 1.5 * v + 2.0 * u;
    return m;
}

MetricSet surrogate_lna(const DeviceGeometry& g, double vgs) {
    check_geometry("LNA", g, 16.0, 28.0);
    check_range("LNA", "V_GS", vgs, -1.6, -1.0);

    const double s = std::log2(g.nf * g.wf / 200.0);
    const double d = (g.gdg - 22.0) / 30.0;
    const double w = (g.wf - 25.0) / 75.0;
    const double u = (vgs + 1.6) / 0.6;

    MetricSet m;
    const double fmax = 115.0 - 9.0 * s - 6.0 * w + 4.0 * bump(u) - 0.03 * square(g.vds - 22.0) + 2.0 * d;
    m["fmax"] = fmax;
    m["Gain"] = 0.08 * (fmax - 75.0) - 1.0 * u;
    m["NFmin"] = 0.9 + 0.12 * s + 0.015 * (g.vds - 16.0) + 0.5 * square(u - 0.35) + 0.15 * w;
    return m;
}

SurrogateEvaluator::SurrogateEvaluator(SurrogateModel model, const DesignSpace& space) : model_(model) {
    static constexpr const char* kNames[5] = {"V_DS", "N_f", "W_f", "GDG", "GSG"};
    for (std::size_t i = 0; i < 5; ++i) {
        auto idx = space.parameter_index(kNames[i]);
        if (!idx) {
            throw EvaluatorError(EvaluatorError::Kind::Domain,
                                 std::string("surrogate evaluator needs a design parameter named ") + kNames[i]);
        }
        index_[i] = *idx;
    }
}

MetricSet SurrogateEvaluator::evaluate(const DesignPoint& design, double operating_value) {
    DeviceGeometry g;
    g.vds = design.values.at(index_[0]);
    g.nf = design.values.at(index_[1]);
    g.wf = design.values.at(index_[2]);
    g.gdg = design.values.at(index_[3]);
    g.gsg = design.values.at(index_[4]);
    return model_ == SurrogateModel::PowerAmplifier ? surrogate_pa(g, operating_value)
                                                    : surrogate_lna(g, operating_value);
}

std::vector<std::string> SurrogateEvaluator::metric_names(SurrogateModel model) {
    if (model == SurrogateModel::PowerAmplifier) return {"Pout_avg", "PAE_avg", "Tj_avg", "Gain", "ACPR"};
    return {"fmax", "Gain", "NFmin"};
}

}  // namespace rpd
