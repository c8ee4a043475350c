#include "rpd/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rpd {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    // 1 - u lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> uniform_sample(Rng& rng, std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("uniform_sample: dimension must be positive");
    std::vector<double> x(dimension);
    for (double& v : x) v = rng.uniform();
    return x;
}

namespace {

struct DirectionEntry {
    unsigned degree;
    unsigned coefficients;
    std::uint32_t m[8];
};

const DirectionEntry kJoeKuo[SobolSequence::kMaxDimension] = {
#include "sobol_table.inc"
};

}  // namespace

SobolSequence::SobolSequence(std::size_t dimension, std::uint64_t start_index) {
    if (dimension == 0 || dimension > kMaxDimension) {
        throw std::invalid_argument("Sobol dimension must be in [1, 32], got " + std::to_string(dimension));
    }
    if (start_index >= (std::uint64_t{1} << kBits)) {
        throw std::invalid_argument("Sobol start index exceeds 2^32");
    }
    directions_.resize(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
        auto& v = directions_[d];
        const auto& e = kJoeKuo[d];
        if (e.degree == 0) {
            for (unsigned j = 0; j < kBits; ++j) v[j] = std::uint32_t{1} << (kBits - 1 - j);
            continue;
        }
        const unsigned s = e.degree;
        const auto* m = e.m;
        for (unsigned j = 0; j < s && j < kBits; ++j) v[j] = m[j] << (kBits - 1 - j);
        for (unsigned j = s; j < kBits; ++j) {
            std::uint32_t x = v[j - s] ^ (v[j - s] >> s);
            for (unsigned k = 1; k < s; ++k) {
                if ((e.coefficients >> (s - 1 - k)) & 1u) x ^= v[j - k];
            }
            v[j] = x;
        }
    }

    // Jump straight to start_index: the state is the XOR of the direction
    // numbers selected by the Gray code of the index.
    state_.assign(dimension, 0);
    index_ = start_index;
    const std::uint64_t gray = start_index ^ (start_index >> 1);
    for (unsigned j = 0; j < kBits; ++j) {
        if ((gray >> j) & 1u) {
            for (std::size_t d = 0; d < dimension; ++d) state_[d] ^= directions_[d][j];
        }
    }
}

std::vector<double> SobolSequence::next() {
    if (index_ >= (std::uint64_t{1} << kBits)) throw std::out_of_range("Sobol sequence exhausted");
    std::vector<double> x(state_.size());
    for (std::size_t d = 0; d < state_.size(); ++d) x[d] = static_cast<double>(state_[d]) * 0x1.0p-32;
    // Advance: flip the direction number at the lowest zero bit of the index.
    const auto c = static_cast<unsigned>(std::countr_one(index_));
    ++index_;
    if (c < kBits) {
        for (std::size_t d = 0; d < state_.size(); ++d) state_[d] ^= directions_[d][c];
    }
    return x;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double log_gaussian(std::span<const double> x, const GmmComponent& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - c.mean[i];
        acc += kLog2Pi + std::log(c.variance[i]) + diff * diff / c.variance[i];
    }
    return -0.5 * acc;
}

double log_sum_exp(std::span<const double> v) {
    const double hi = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

}  // namespace

double GmmModel::log_density(std::span<const double> x) const {
    std::vector<double> terms;
    terms.reserve(components.size());
    for (const auto& c : components) terms.push_back(std::log(c.weight) + log_gaussian(x, c));
    return log_sum_exp(terms);
}

GmmFit gmm_fit(std::span<const std::vector<double>> samples, const GmmFitOptions& options) {
    if (samples.empty()) throw std::invalid_argument("gmm_fit: no samples");
    if (options.components == 0) throw std::invalid_argument("gmm_fit: component count must be positive");
    if (!(options.reg > 0.0)) throw std::invalid_argument("gmm_fit: reg must be positive");
    const std::size_t dim = samples.front().size();
    if (dim == 0) throw std::invalid_argument("gmm_fit: zero-dimensional samples");
    for (const auto& s : samples) {
        if (s.size() != dim) throw std::invalid_argument("gmm_fit: samples have mixed dimensions");
    }

    const std::size_t n = samples.size();
    std::vector<std::vector<double>> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    const std::size_t k = std::min(options.components, distinct);

    std::vector<double> pooled_mean(dim, 0.0), pooled_var(dim, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) pooled_mean[i] += s[i];
    }
    for (double& m : pooled_mean) m /= static_cast<double>(n);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = s[i] - pooled_mean[i];
            pooled_var[i] += d * d;
        }
    }
    for (double& v : pooled_var) v = std::max(v / static_cast<double>(n), options.reg);

    GmmModel model;
    model.dimension = dim;
    if (k == 1) {
        model.components.push_back({1.0, pooled_mean, pooled_var});
    } else {
        // Quantiles over the distinct values, so no two components start
        // on the same point.
        for (std::size_t j = 0; j < k; ++j) {
            const auto pos = static_cast<std::size_t>(
                (static_cast<double>(j) + 0.5) * static_cast<double>(distinct) / static_cast<double>(k));
            model.components.push_back({1.0 / static_cast<double>(k), sorted[pos], pooled_var});
        }
    }

    GmmFit fit;
    std::vector<double> resp(n * k);
    std::vector<double> terms(k);
    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        // E-step
        double ll = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < k; ++j) {
                terms[j] = std::log(model.components[j].weight) + log_gaussian(samples[r], model.components[j]);
            }
            const double lse = log_sum_exp(terms);
            ll += lse;
            for (std::size_t j = 0; j < k; ++j) resp[r * k + j] = std::exp(terms[j] - lse);
        }
        const bool converged = !fit.log_likelihood.empty() && ll - fit.log_likelihood.back() < options.tol;
        fit.log_likelihood.push_back(ll);
        if (converged) break;

        // M-step
        for (std::size_t j = 0; j < k; ++j) {
            double nk = 0.0;
            for (std::size_t r = 0; r < n; ++r) nk += resp[r * k + j];
            auto& c = model.components[j];
            if (!(nk > 0.0)) {
                // Component lost all support; leave its Gaussian in place.
                c.weight = 0.0;
                continue;
            }
            c.weight = nk / static_cast<double>(n);
            std::fill(c.mean.begin(), c.mean.end(), 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const double w = resp[r * k + j];
                for (std::size_t i = 0; i < dim; ++i) c.mean[i] += w * samples[r][i];
            }
            for (double& m : c.mean) m /= nk;
            std::fill(c.variance.begin(), c.variance.end(), 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const double w = resp[r * k + j];
                for (std::size_t i = 0; i < dim; ++i) {
                    const double d = samples[r][i] - c.mean[i];
                    c.variance[i] += w * d * d;
                }
            }
            for (double& v : c.variance) v = std::max(v / nk, options.reg);
        }
        std::erase_if(model.components, [](const GmmComponent& c) { return !(c.weight > 0.0); });
        // Once the model changes shape the responsibilities table must follow.
        if (model.components.size() != k) {
            return gmm_fit(samples, GmmFitOptions{model.components.size(), options.reg, options.max_iters,
                                                  options.tol});
        }
    }

    double total = 0.0;
    for (const auto& c : model.components) total += c.weight;
    for (auto& c : model.components) c.weight /= total;
    fit.model = std::move(model);
    return fit;
}

std::vector<double> gmm_sample(const GmmModel& model, Rng& rng) {
    if (model.components.empty()) throw std::invalid_argument("gmm_sample: empty model");
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = model.components.size() - 1;
    for (std::size_t j = 0; j < model.components.size(); ++j) {
        acc += model.components[j].weight;
        if (u < acc) {
            pick = j;
            break;
        }
    }
    const auto& c = model.components[pick];
    std::vector<double> x(model.dimension);
    for (std::size_t i = 0; i < model.dimension; ++i) {
        x[i] = std::clamp(c.mean[i] + std::sqrt(c.variance[i]) * rng.normal(), 0.0, 1.0);
    }
    return x;
}

}  // namespace rpd
