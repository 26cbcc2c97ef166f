#include "dmcrf/gcrf.hpp"
#include "quadrature.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace dmcrf;
using dmcrf::test::column;
using dmcrf::test::params;
using dmcrf::test::uniform_vector;

TEST_SUITE("oracle") {

TEST_CASE("two-step chain mean by quadrature") {
    const auto q = oracle::quadrature_moments(column({0, 1}), params({1}, 1), EdgeSpec::ChainAdjacency);
    CHECK(std::abs(q.mean(0) - 1.0 / 3) < 1e-5);
    CHECK(std::abs(q.mean(1) - 2.0 / 3) < 1e-5);
    CHECK(std::abs(q.normalized_mass - 1.0) < 1e-6);
    // Covariance is the inverse of [[4,-2],[-2,4]].
    CHECK(std::abs(q.covariance(0, 0) - 1.0 / 3) < 1e-6);
    CHECK(std::abs(q.covariance(0, 1) - 1.0 / 6) < 1e-6);
}

TEST_CASE("single output is a scalar Gaussian") {
    // exp(-(y - c)^2): precision 2, variance 1/2.
    for (EdgeSpec e : {EdgeSpec::ChainAdjacency, EdgeSpec::DistanceToMean}) {
        const auto q = oracle::quadrature_moments(column({0.4}), params({1}, 1), e);
        CHECK(std::abs(q.mean(0) - 0.4) < 1e-9);
        CHECK(std::abs(q.covariance(0, 0) - 0.5) < 1e-9);
        CHECK(std::abs(q.log_normalizer - 0.5 * std::log(3.141592653589793)) < 1e-9);
    }
}

TEST_CASE("quadrature log-likelihood matches log_density") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 10; ++t) {
        const EdgeSpec e = t % 2 ? EdgeSpec::DistanceToMean : EdgeSpec::ChainAdjacency;
        const BaselineOutputs f{uniform_vector(rng, 2, -1, 1)};
        const auto p = GcrfParams::from_log(uniform_vector(rng, 2, -1.5, 1.5));
        const Vector y = uniform_vector(rng, 2, -1, 1);
        const double exact = log_density(assemble_canonical(f, p, e), y);
        CHECK(std::abs(oracle::quadrature_loglik(y, f, p, e) - exact) < 1e-5);
    }
    const BaselineOutputs f{uniform_vector(rng, 3, -1, 1)};
    const auto p = params({0.8}, 1.6);
    const Vector y = uniform_vector(rng, 3, -1, 1);
    const double exact = log_density(assemble_canonical(f, p, EdgeSpec::DistanceToMean), y);
    CHECK(std::abs(oracle::quadrature_loglik(y, f, p, EdgeSpec::DistanceToMean) - exact) < 1e-5);
}

TEST_CASE("mean is the highest grid energy") {
    const auto f = column({0.2, -0.5});
    const auto p = params({1.2}, 0.9);
    const auto cg = assemble_canonical(f, p, EdgeSpec::DistanceToMean);
    const double top = energy(cg.mean, f, p, EdgeSpec::DistanceToMean);
    const auto fit = oracle::quadratic_fit(f, p, EdgeSpec::DistanceToMean);
    for (int i = -50; i <= 50; ++i)
        for (int j = -50; j <= 50; ++j) {
            if (i == 0 && j == 0) continue;
            Vector y = cg.mean;
            y(0) += 0.1 * i * fit.marginal_sd(0);
            y(1) += 0.1 * j * fit.marginal_sd(1);
            CHECK(energy(y, f, p, EdgeSpec::DistanceToMean) < top);
        }
}

TEST_CASE("quadratic fit recovers the precision independently") {
    const auto f = column({0.3, 0.1, 0.9});
    const auto p = params({0.7}, 2.5);
    for (EdgeSpec e : {EdgeSpec::ChainAdjacency, EdgeSpec::DistanceToMean}) {
        const auto fit = oracle::quadratic_fit(f, p, e);
        const auto cg = assemble_canonical(f, p, e);
        CHECK((fit.precision - cg.precision).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((fit.mode - cg.mean).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("grid settings are validated") {
    CHECK_THROWS(oracle::quadrature_moments(column({0, 1}), params({1}, 1), EdgeSpec::ChainAdjacency, {4.0, 201}));
    CHECK_THROWS(oracle::quadrature_moments(column({0, 1}), params({1}, 1), EdgeSpec::ChainAdjacency, {8.0, 50}));
    CHECK_THROWS(oracle::quadrature_moments(column({0, 1, 2, 3}), params({1}, 1), EdgeSpec::ChainAdjacency));
}

}  // TEST_SUITE
