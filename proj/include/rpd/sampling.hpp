#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rpd {

/// Seeded random stream. mt19937_64 output is fixed by the standard; the
/// conversions to uniform and normal variates are done here rather than
/// through <random> distributions, whose algorithms vary between
/// standard libraries, so traces are identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();  // [0, 1), 53 random bits
    double normal();   // standard normal, Box-Muller

private:
    std::mt19937_64 engine_;
};

// Independent U[0,1) coordinates. Throws std::invalid_argument for dimension 0.
std::vector<double> uniform_sample(Rng& rng, std::size_t dimension);

/// Unscrambled Sobol sequence in Gray-code order with Joe-Kuo direction
/// numbers (new-joe-kuo-6.21201). Index 0 is the origin.
class SobolSequence {
public:
    static constexpr std::size_t kMaxDimension = 32;
    static constexpr unsigned kBits = 32;

    // Throws std::invalid_argument if dimension is 0 or above kMaxDimension.
    explicit SobolSequence(std::size_t dimension, std::uint64_t start_index = 0);

    std::vector<double> next();
    std::uint64_t next_index() const { return index_; }
    std::size_t dimension() const { return directions_.size(); }

    // Direction number j (0-based bit) of dimension d, left-aligned in 32 bits.
    std::uint32_t direction(std::size_t d, unsigned j) const { return directions_[d][j]; }

private:
    std::vector<std::array<std::uint32_t, kBits>> directions_;
    std::vector<std::uint32_t> state_;
    std::uint64_t index_ = 0;
};

struct GmmComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> variance;  // diagonal
};

struct GmmModel {
    std::size_t dimension = 0;
    std::vector<GmmComponent> components;

    double log_density(std::span<const double> x) const;
};

struct GmmFitOptions {
    std::size_t components = 2;
    double reg = 1e-3;  // floor on every variance entry
    std::size_t max_iters = 200;
    double tol = 1e-8;  // stop once the log-likelihood gain drops below this
};

struct GmmFit {
    GmmModel model;
    // Total data log-likelihood at each E-step, one entry per iteration.
    std::vector<double> log_likelihood;
};

/**
 * Diagonal-covariance EM.
 *
 * Initialization is deterministic: the distinct samples are sorted
 * lexicographically and the k means are taken at evenly spaced quantiles
 * (positions floor((j + 1/2) m / k) of the m distinct samples); every
 * component starts with weight 1/k and the
 * pooled per-coordinate variance. The M-step clamps variances at reg,
 * which is the exact maximizer under that floor, so the log-likelihood
 * never decreases. k is reduced to the number of distinct samples.
 *
 * Throws std::invalid_argument for empty samples, k = 0, reg <= 0 or
 * ragged dimensions.
 */
GmmFit gmm_fit(std::span<const std::vector<double>> samples, const GmmFitOptions& options);

// Picks a component by weight, draws from its diagonal Gaussian, clamps to [0,1].
std::vector<double> gmm_sample(const GmmModel& model, Rng& rng);

}  // namespace rpd
