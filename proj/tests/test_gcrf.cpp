#include "dmcrf/errors.hpp"
#include "dmcrf/gcrf.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dmcrf;
using dmcrf::test::column;
using dmcrf::test::params;
using dmcrf::test::uniform_vector;

namespace {

constexpr EdgeSpec kEdges[] = {EdgeSpec::ChainAdjacency, EdgeSpec::DistanceToMean};

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

BaselineOutputs random_baselines(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
    Matrix f(n, k);
    for (Eigen::Index j = 0; j < k; ++j) f.col(j) = uniform_vector(rng, n, -1, 1);
    return {f};
}

Vector random_log_params(std::mt19937_64& rng, Eigen::Index k) {
    return uniform_vector(rng, k + 1, std::log(0.1), std::log(10.0));
}

}  // namespace

TEST_SUITE("gcrf") {

TEST_CASE("edge names") {
    CHECK(to_string(EdgeSpec::ChainAdjacency) == "chain");
    CHECK(parse_edge("dm") == EdgeSpec::DistanceToMean);
    CHECK_THROWS_AS(parse_edge("both"), InvalidArgument);
}

TEST_CASE("energy examples") {
    for (EdgeSpec e : kEdges) {
        auto f = column({3, 3, 3});
        CHECK(energy(vec({3, 3, 3}), f, params({1}, 1), e) == 0.0);
    }
    CHECK(energy(vec({0, 1}), column({0, 1}), params({1}, 1), EdgeSpec::ChainAdjacency) == -1.0);
    CHECK(energy(vec({1, 2, 3}), column({0, 0, 0}), params({0}, 1), EdgeSpec::DistanceToMean) == -3.25);
    CHECK_THROWS_AS(energy(vec({1, 2}), column({0, 0, 0}), params({1}, 1), EdgeSpec::ChainAdjacency),
                    DimensionMismatch);
}

TEST_CASE("energy is never positive") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto f = random_baselines(rng, 4, 2);
        auto p = GcrfParams::from_log(random_log_params(rng, 2));
        for (EdgeSpec e : kEdges) CHECK(energy(uniform_vector(rng, 4, -3, 3), f, p, e) <= 0.0);
    }
}

TEST_CASE("running means") {
    CHECK(dm_running_means(vec({4, 4, 4})) == vec({4, 4}));
    CHECK(dm_running_means(vec({1, 2, 3})) == vec({1, 1.5}));
    CHECK(dm_running_means(vec({1, 2})) == vec({1}));
    CHECK_THROWS_AS(dm_running_means(vec({1})), SequenceTooShort);
}

TEST_CASE("build_A") {
    CHECK(build_A(vec({1}), 2) == Matrix::Identity(2, 2));
    CHECK(build_A(vec({0.5, 1.5}), 3) == 2.0 * Matrix::Identity(3, 3));
    CHECK(build_A(vec({1}), 1) == Matrix::Identity(1, 1));
}

TEST_CASE("build_C examples") {
    Matrix chain(3, 3);
    chain << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK(build_C(EdgeSpec::ChainAdjacency, 1.0, 3) == chain);

    Matrix dm(3, 3);
    dm << 1.25, -0.75, -0.5, -0.75, 1.25, -0.5, -0.5, -0.5, 1;
    CHECK((build_C(EdgeSpec::DistanceToMean, 1.0, 3) - dm).cwiseAbs().maxCoeff() < 1e-15);

    for (EdgeSpec e : kEdges) {
        CHECK(build_C(e, 0.0, 4).isZero());
        CHECK_THROWS_AS(build_C(e, 1.0, 1), SequenceTooShort);
    }
}

TEST_CASE("build_C matches the outer-product construction") {
    const Eigen::Index n = 7;
    Matrix expect = Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) {
        Vector v = Vector::Zero(n);
        v(i) = 1.0;
        v.head(i).setConstant(-1.0 / static_cast<double>(i));
        expect += v * v.transpose();
    }
    CHECK((build_C(EdgeSpec::DistanceToMean, 1.0, n) - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("quadratic form equals the term-by-term penalty") {
    std::mt19937_64 rng(17);
    for (EdgeSpec e : kEdges) {
        for (int t = 0; t < 100; ++t) {
            const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 9);
            const double w = std::exp(uniform_vector(rng, 1, -3, 3)(0));
            const Vector y = uniform_vector(rng, n, -5, 5);
            const double quad = y.dot(build_C(e, w, n) * y);
            CHECK(rel_err(quad, w * edge_penalty(y, e)) < 1e-10);
        }
    }
}

TEST_CASE("build_linear") {
    CHECK(build_linear(vec({1}), column({0, 1})) == vec({0, 2}));
    CHECK(build_linear(vec({0.5}), column({2, 4})) == vec({2, 4}));
    CHECK(build_linear(vec({1, 2}), BaselineOutputs{Matrix::Zero(3, 2)}).isZero());
    CHECK_THROWS_AS(build_linear(vec({1, 2}), column({0, 1})), DimensionMismatch);
}

TEST_CASE("assemble_canonical on the two-step chain") {
    const auto cg = assemble_canonical(column({0, 1}), params({1}, 1), EdgeSpec::ChainAdjacency);
    Matrix p(2, 2);
    p << 4, -2, -2, 4;
    CHECK(cg.precision == p);
    CHECK(cg.linear == vec({0, 2}));
    CHECK(cg.mean(0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(cg.mean(1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    const double expect_norm = std::log(2 * std::numbers::pi) - 0.5 * std::log(12.0);
    CHECK(cg.log_norm == doctest::Approx(expect_norm).epsilon(1e-14));
}

TEST_CASE("negligible edge weight leaves the baselines") {
    for (EdgeSpec e : kEdges) {
        const auto f = column({0.2, 0.9, 0.4, 0.6});
        const auto cg = assemble_canonical(f, params({1}, 1e-12), e);
        CHECK((cg.mean - f.predictions.col(0)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("constant baselines give a constant mean") {
    for (EdgeSpec e : kEdges) {
        const auto cg = assemble_canonical(BaselineOutputs{Matrix::Constant(6, 2, 0.7)}, params({0.3, 2}, 5), e);
        CHECK((cg.mean.array() - 0.7).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("canonical form invariants") {
    std::mt19937_64 rng(23);
    for (EdgeSpec e : kEdges) {
        for (int t = 0; t < 20; ++t) {
            const auto f = random_baselines(rng, 6, 2);
            const auto cg = assemble_canonical(f, GcrfParams::from_log(random_log_params(rng, 2)), e);
            CHECK((cg.precision - cg.precision.transpose()).cwiseAbs().maxCoeff() <=
                  1e-12 * cg.precision.cwiseAbs().maxCoeff());
            CHECK((cg.precision * cg.mean - cg.linear).norm() <= 1e-10 * cg.linear.norm());
            const double log_det = std::log(cg.precision.determinant());
            CHECK(cg.log_norm == doctest::Approx(3 * std::log(2 * std::numbers::pi) - 0.5 * log_det).epsilon(1e-12));
        }
    }
}

TEST_CASE("precision stays SPD across twelve orders of magnitude") {
    std::mt19937_64 rng(29);
    for (EdgeSpec e : kEdges) {
        for (int t = 0; t < 200; ++t) {
            const Vector lp = uniform_vector(rng, 2, std::log(1e-6), std::log(1e6));
            const auto cg = assemble_canonical(random_baselines(rng, 8, 1), GcrfParams::from_log(lp), e);
            CHECK(cg.cholesky.info() == Eigen::Success);
            CHECK(cg.mean.allFinite());
        }
    }
}

TEST_CASE("invalid parameters are rejected") {
    for (EdgeSpec e : kEdges) {
        CHECK_THROWS_AS(assemble_canonical(column({0, 1}), params({0}, 1), e), NotPositiveDefinite);
        CHECK_THROWS_AS(assemble_canonical(column({0, 1}), params({1}, -1), e), NotPositiveDefinite);
        CHECK_THROWS_AS(assemble_canonical(column({0}), params({1}, 1), e), SequenceTooShort);
    }
}

TEST_CASE("log_density examples") {
    CanonicalGaussian one;
    one.precision = Matrix::Constant(1, 1, 2.0);
    one.mean = Vector::Zero(1);
    one.log_norm = 0.5 * std::log(2 * std::numbers::pi) - 0.5 * std::log(2.0);
    CHECK(log_density(one, Vector::Zero(1)) == doctest::Approx(-0.5723649429247001).epsilon(1e-15));

    std::mt19937_64 rng(31);
    for (EdgeSpec e : kEdges) {
        const auto cg = assemble_canonical(random_baselines(rng, 4, 1), params({1.3}, 0.8), e);
        const double at_mean = log_density(cg, cg.mean);
        const double log_det = std::log(cg.precision.determinant());
        CHECK(at_mean == doctest::Approx(-2 * std::log(2 * std::numbers::pi) + 0.5 * log_det).epsilon(1e-12));

        Eigen::SelfAdjointEigenSolver<Matrix> eig(cg.precision);
        const Vector v = eig.eigenvectors().col(1);
        CHECK(log_density(cg, cg.mean + 0.7 * v) == doctest::Approx(log_density(cg, cg.mean - 0.7 * v)).epsilon(1e-13));
        CHECK_THROWS_AS(log_density(cg, Vector::Zero(3)), DimensionMismatch);
    }
}

TEST_CASE("log-density differences equal energy differences") {
    std::mt19937_64 rng(37);
    for (EdgeSpec e : kEdges) {
        for (int t = 0; t < 50; ++t) {
            const auto f = random_baselines(rng, 5, 2);
            const auto p = GcrfParams::from_log(random_log_params(rng, 2));
            const auto cg = assemble_canonical(f, p, e);
            const Vector a = uniform_vector(rng, 5, -2, 2);
            const Vector b = uniform_vector(rng, 5, -2, 2);
            CHECK(rel_err(log_density(cg, a) - log_density(cg, b), energy(a, f, p, e) - energy(b, f, p, e)) < 1e-9);
        }
    }
}

TEST_CASE("mean is the mode") {
    std::mt19937_64 rng(41);
    for (EdgeSpec e : kEdges) {
        const auto cg = assemble_canonical(random_baselines(rng, 5, 1), params({2.0}, 3.0), e);
        const double best = log_density(cg, cg.mean);
        for (int t = 0; t < 100; ++t) CHECK(log_density(cg, cg.mean + uniform_vector(rng, 5, -0.1, 0.1)) < best);
    }
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(43);
    const double h = 1e-5;
    for (EdgeSpec e : kEdges) {
        for (int t = 0; t < 20; ++t) {
            const auto f = random_baselines(rng, 5, 2);
            const Vector y = uniform_vector(rng, 5, -1, 1);
            const Vector lp = random_log_params(rng, 2);
            const auto eval = log_likelihood_and_grad(y, f, lp, e);
            for (Eigen::Index j = 0; j < lp.size(); ++j) {
                Vector up = lp, dn = lp;
                up(j) += h;
                dn(j) -= h;
                const double fd = (log_likelihood_and_grad(y, f, up, e).value -
                                   log_likelihood_and_grad(y, f, dn, e).value) / (2 * h);
                CHECK(std::abs(fd - eval.gradient(j)) / std::max(std::abs(fd), 1e-3) < 1e-4);
            }
        }
    }
}

TEST_CASE("gradient at the mean comes from the log-determinant only") {
    for (EdgeSpec e : kEdges) {
        const auto f = column({0, 1});
        const auto p = params({1.5}, 0.7);
        const auto cg = assemble_canonical(f, p, e);
        const auto eval = log_likelihood_and_grad(cg.mean, f, p.to_log(), e);
        const Matrix cov = cg.precision.inverse();
        const Matrix c1 = build_C(e, 1.0, 2);
        CHECK(eval.gradient(0) == doctest::Approx(0.5 * (cov * 2.0).trace() * p.alpha(0)).epsilon(1e-12));
        CHECK(eval.gradient(1) == doctest::Approx(0.5 * (cov * 2.0 * c1).trace() * p.edge_weight).epsilon(1e-12));
    }
}

TEST_CASE("log-space round trip") {
    const auto p = params({0.25, 4}, 1e-3);
    const auto q = GcrfParams::from_log(p.to_log());
    CHECK((q.alpha - p.alpha).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(q.edge_weight == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("spectral route agrees with the dense route") {
    std::mt19937_64 rng(47);
    for (EdgeSpec e : kEdges) {
        for (Eigen::Index n : {2, 3, 9, 40}) {
            auto spectrum = std::make_shared<const EdgeSpectrum>(EdgeSpectrum::compute(e, n));
            const Matrix rebuilt = spectrum->eigenvectors * spectrum->eigenvalues.asDiagonal() *
                                   spectrum->eigenvectors.transpose();
            CHECK((rebuilt - build_C(e, 1.0, n)).cwiseAbs().maxCoeff() < 1e-12);
            for (int t = 0; t < 5; ++t) {
                const auto f = random_baselines(rng, n, 2);
                const Vector y = uniform_vector(rng, n, -1, 1);
                const Vector lp = random_log_params(rng, 2);
                const auto dense = log_likelihood_and_grad(y, f, lp, e);
                const auto fast = SpectralObjective(y, f, spectrum).evaluate(lp);
                CHECK(rel_err(dense.value, fast.value) < 1e-10);
                for (Eigen::Index j = 0; j < lp.size(); ++j)
                    CHECK(std::abs(dense.gradient(j) - fast.gradient(j)) <= 1e-9 * (1 + std::abs(dense.gradient(j))));
            }
        }
    }
}

TEST_CASE("Fisher information is symmetric PSD and matches the mean curvature") {
    std::mt19937_64 rng(53);
    for (EdgeSpec e : kEdges) {
        const Eigen::Index n = 6;
        auto spectrum = std::make_shared<const EdgeSpectrum>(EdgeSpectrum::compute(e, n));
        const auto f = random_baselines(rng, n, 2);
        const Vector lp = random_log_params(rng, 2);
        const SpectralObjective obj(uniform_vector(rng, n, -1, 1), f, spectrum);
        const Matrix fisher = obj.fisher_information(lp);
        CHECK((fisher - fisher.transpose()).cwiseAbs().maxCoeff() < 1e-12 * fisher.cwiseAbs().maxCoeff());
        CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(fisher).eigenvalues().minCoeff() > -1e-12);

        // Average of the gradient outer product over exact samples from the model.
        const auto cg = assemble_canonical(f, GcrfParams::from_log(lp), e);
        const Matrix l_inv_t = cg.cholesky.matrixU().solve(Matrix::Identity(n, n));
        std::normal_distribution<double> normal;
        Matrix outer = Matrix::Zero(3, 3);
        const int samples = 20000;
        for (int s = 0; s < samples; ++s) {
            Vector z(n);
            for (auto& v : z) v = normal(rng);
            const Vector y = cg.mean + l_inv_t * z;
            const Vector gy = SpectralObjective(y, f, spectrum).evaluate(lp).gradient;
            outer += gy * gy.transpose();
        }
        outer /= samples;
        CHECK((outer - fisher).cwiseAbs().maxCoeff() < 0.08 * fisher.cwiseAbs().maxCoeff());
    }
}

}  // TEST_SUITE
