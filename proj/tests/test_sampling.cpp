#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rpd/sampling.hpp"
#include "support.hpp"

using namespace rpd;

namespace {

// Each of the first 2^m points falls in its own dyadic bin of width 2^-m.
bool stratified(const std::vector<std::vector<double>>& points, std::size_t dim, unsigned m) {
    const std::size_t bins = std::size_t{1} << m;
    std::vector<int> count(bins, 0);
    for (std::size_t i = 0; i < bins; ++i) {
        const auto bin = static_cast<std::size_t>(points[i][dim] * double(bins));
        if (bin >= bins) return false;
        ++count[bin];
    }
    for (int c : count)
        if (c != 1) return false;
    return true;
}

std::vector<std::vector<double>> two_clusters(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, 0.02);
    std::vector<std::vector<double>> s;
    for (int i = 0; i < 100; ++i) s.push_back({0.2 + n(gen), 0.2 + n(gen)});
    for (int i = 0; i < 100; ++i) s.push_back({0.8 + n(gen), 0.8 + n(gen)});
    return s;
}

}  // namespace

TEST_CASE("uniform_sample determinism, range and mean") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(uniform_sample(a, 3) == uniform_sample(b, 3));

    Rng r(7);
    std::vector<double> sum(4, 0.0);
    for (int i = 0; i < 10000; ++i) {
        const auto v = uniform_sample(r, 4);
        for (std::size_t d = 0; d < 4; ++d) {
            CHECK(v[d] >= 0.0);
            CHECK(v[d] < 1.0);
            sum[d] += v[d];
        }
    }
    for (double s : sum) {
        CHECK(s / 10000 >= 0.47);
        CHECK(s / 10000 <= 0.53);
    }
    CHECK_THROWS_AS(uniform_sample(r, 0), std::invalid_argument);
}

TEST_CASE("Sobol: origin first, first dimension is the radical inverse") {
    SobolSequence s(1);
    std::set<double> first4;
    for (std::uint64_t i = 0; i < 4; ++i) first4.insert(s.next()[0]);
    CHECK(first4 == std::set<double>{0.0, 0.5, 0.25, 0.75});

    // Gray-code order visits the same set as the radical inverse in each block of 2^m.
    for (unsigned m = 1; m <= 10; ++m) {
        SobolSequence u(1);
        std::set<double> got, want;
        for (std::uint64_t i = 0; i < (1u << m); ++i) {
            got.insert(u.next()[0]);
            want.insert(oracle::radical_inverse(i));
        }
        CHECK(got == want);
    }
    CHECK(SobolSequence(32).next() == std::vector<double>(32, 0.0));
    CHECK_THROWS_AS(SobolSequence(0), std::invalid_argument);
    CHECK_THROWS_AS(SobolSequence(33), std::invalid_argument);
}

TEST_CASE("Sobol: dyadic stratification for m <= 6 and dimension <= 10") {
    for (std::size_t dim = 1; dim <= 10; ++dim) {
        SobolSequence s(dim);
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 64; ++i) pts.push_back(s.next());
        for (unsigned m = 0; m <= 6; ++m)
            for (std::size_t d = 0; d < dim; ++d) CHECK(stratified(pts, d, m));
    }
    SobolSequence five(5);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 16; ++i) pts.push_back(five.next());
    for (std::size_t d = 0; d < 5; ++d) CHECK(stratified(pts, d, 4));
}

TEST_CASE("Sobol: matches the reference table in all 32 dimensions") {
    std::ifstream in(support::fixture("sobol_d32_reference.csv"));
    REQUIRE(in);
    std::string line;
    std::map<std::uint64_t, std::vector<double>> expected;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        const auto index = std::stoull(field);
        std::vector<double> v;
        while (std::getline(row, field, ',')) v.push_back(std::stod(field));
        expected[index] = v;
    }
    REQUIRE(expected.size() >= 6);
    SobolSequence s(32);
    for (std::uint64_t i = 0; i <= expected.rbegin()->first; ++i) {
        const auto p = s.next();
        if (auto it = expected.find(i); it != expected.end()) {
            INFO("index " << i);
            CHECK(p == it->second);
        }
    }
}

TEST_CASE("Sobol: starting index skips ahead exactly") {
    SobolSequence full(7);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(full.next());
    for (std::uint64_t start : {1u, 5u, 64u, 129u, 250u}) {
        SobolSequence jumped(7, start);
        CHECK(jumped.next_index() == start);
        for (std::uint64_t i = start; i < 300; ++i) CHECK(jumped.next() == pts[i]);
    }
}

TEST_CASE("GMM: identical samples give the sample mean and the floor") {
    std::vector<std::vector<double>> same(10, std::vector<double>{0.3, 0.7});
    GmmFitOptions o;
    o.components = 1;
    o.reg = 1e-3;
    const auto fit = gmm_fit(same, o);
    REQUIRE(fit.model.components.size() == 1);
    CHECK(fit.model.components[0].mean[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fit.model.components[0].mean[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(fit.model.components[0].variance == std::vector<double>{1e-3, 1e-3});
    CHECK(fit.model.components[0].weight == 1.0);

    o.components = 3;  // reduced to the single distinct sample
    CHECK(gmm_fit(same, o).model.components.size() == 1);
}

TEST_CASE("GMM: two-cluster recovery") {
    GmmFitOptions o;
    o.components = 2;
    o.reg = 1e-6;
    const auto fit = gmm_fit(two_clusters(1), o);
    REQUIRE(fit.model.components.size() == 2);
    auto c = fit.model.components;
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.mean[0] < b.mean[0]; });
    for (std::size_t d = 0; d < 2; ++d) {
        CHECK(std::fabs(c[0].mean[d] - 0.2) < 0.05);
        CHECK(std::fabs(c[1].mean[d] - 0.8) < 0.05);
    }
    CHECK(std::fabs(c[0].weight - 0.5) < 0.1);
    CHECK(std::fabs(c[1].weight - 0.5) < 0.1);
    CHECK(c[0].weight + c[1].weight == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(5);
    int low = 0;
    for (int i = 0; i < 10000; ++i) low += gmm_sample(fit.model, rng)[0] < 0.5 ? 1 : 0;
    CHECK(std::fabs(low / 10000.0 - c[0].weight) < 0.05);
}

TEST_CASE("GMM: log-likelihood never decreases and variances respect the floor") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0, 1);
    for (int set = 0; set < 20; ++set) {
        const std::size_t dim = 1 + gen() % 5;
        const std::size_t n = 5 + gen() % 60;
        std::vector<std::vector<double>> samples(n, std::vector<double>(dim));
        for (auto& s : samples)
            for (auto& x : s) x = u(gen) * u(gen);
        GmmFitOptions o;
        o.components = 1 + gen() % 4;
        o.reg = 1e-4 * double(1 + gen() % 50);
        const auto fit = gmm_fit(samples, o);
        REQUIRE_FALSE(fit.log_likelihood.empty());
        for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i)
            CHECK(fit.log_likelihood[i] >= fit.log_likelihood[i - 1] - 1e-9);
        double wsum = 0.0;
        for (const auto& c : fit.model.components) {
            wsum += c.weight;
            CHECK(c.weight > 0.0);
            for (double v : c.variance) CHECK(v >= o.reg);
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(gmm_fit(std::vector<std::vector<double>>{}, GmmFitOptions{}), std::invalid_argument);
}

TEST_CASE("GMM sampling: vanishing variance, clamping, determinism") {
    GmmModel tight{2, {{1.0, {0.5, 0.5}, {1e-6, 1e-6}}}};
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const auto x = gmm_sample(tight, rng);
        CHECK(std::fabs(x[0] - 0.5) < 0.01);
        CHECK(std::fabs(x[1] - 0.5) < 0.01);
    }
    GmmModel wide{1, {{1.0, {1.5}, {4.0}}}};
    for (int i = 0; i < 1000; ++i) {
        const double x = gmm_sample(wide, rng)[0];
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    Rng a(3), b(3);
    for (int i = 0; i < 50; ++i) CHECK(gmm_sample(wide, a) == gmm_sample(wide, b));
}
