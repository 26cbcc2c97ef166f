#include "dmcrf/gcrf.hpp"

#include "dmcrf/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace dmcrf {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void require_length(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want)
        throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                                std::to_string(got));
}

void require_min_length(Eigen::Index n, Eigen::Index min) {
    if (n < min) throw SequenceTooShort(static_cast<std::size_t>(std::max<Eigen::Index>(n, 0)),
                                        static_cast<std::size_t>(min));
}

// Sum of the upper-triangular pairs y' C1 y for the unit-weight edge matrix.
Matrix unit_edge_matrix(EdgeSpec edge, Eigen::Index n) {
    Matrix c = Matrix::Zero(n, n);
    if (edge == EdgeSpec::ChainAdjacency) {
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            c(i, i) += 1.0;
            c(i + 1, i + 1) += 1.0;
            c(i, i + 1) -= 1.0;
            c(i + 1, i) -= 1.0;
        }
        return c;
    }
    // Sum over i >= 1 (0-based) of v_i v_i', v_i = e_i - (1/i) * (e_0 + ... + e_{i-1}).
    // tail[m] = sum_{i=m}^{n-1} 1/i^2
    Vector tail = Vector::Zero(n + 1);
    for (Eigen::Index i = n - 1; i >= 1; --i) tail(i) = tail(i + 1) + 1.0 / (static_cast<double>(i) * i);
    for (Eigen::Index k = 0; k < n; ++k) {
        c(k, k) = (k >= 1 ? 1.0 : 0.0) + tail(k + 1);
        for (Eigen::Index j = 0; j < k; ++j) {
            const double v = -1.0 / static_cast<double>(k) + tail(k + 1);
            c(j, k) = v;
            c(k, j) = v;
        }
    }
    return c;
}

struct DenseTerms {
    CanonicalGaussian cg;
    Matrix unit_edge;
};

DenseTerms assemble_dense(const BaselineOutputs& baselines, const GcrfParams& params, EdgeSpec edge) {
    baselines.validate();
    params.validate();
    const auto n = baselines.length();
    require_min_length(n, 2);
    require_length(params.alpha.size(), baselines.regressors(), "alpha");

    DenseTerms out;
    out.unit_edge = unit_edge_matrix(edge, n);
    CanonicalGaussian& cg = out.cg;
    cg.precision = 2.0 * (build_A(params.alpha, n) + params.edge_weight * out.unit_edge);
    cg.linear = build_linear(params.alpha, baselines);
    cg.cholesky.compute(cg.precision);
    if (cg.cholesky.info() != Eigen::Success)
        throw NotPositiveDefinite("precision matrix failed Cholesky factorization");
    cg.mean = cg.cholesky.solve(cg.linear);
    const double log_det = 2.0 * cg.cholesky.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(log_det) || !cg.mean.allFinite())
        throw NotPositiveDefinite("precision matrix is numerically singular");
    cg.log_norm = 0.5 * static_cast<double>(n) * kLog2Pi - 0.5 * log_det;
    return out;
}

}  // namespace

std::string_view to_string(EdgeSpec edge) {
    return edge == EdgeSpec::ChainAdjacency ? "chain" : "dm";
}

EdgeSpec parse_edge(std::string_view name) {
    if (name == "chain") return EdgeSpec::ChainAdjacency;
    if (name == "dm") return EdgeSpec::DistanceToMean;
    throw InvalidArgument("unknown edge variant '" + std::string(name) + "' (expected chain or dm)");
}

void GcrfParams::validate() const {
    if (alpha.size() == 0) throw InvalidArgument("at least one variable-feature weight is required");
    for (Eigen::Index k = 0; k < alpha.size(); ++k)
        if (!(std::isfinite(alpha(k)) && alpha(k) > 0.0))
            throw NotPositiveDefinite("alpha[" + std::to_string(k) + "] must be positive and finite");
    if (!(std::isfinite(edge_weight) && edge_weight > 0.0))
        throw NotPositiveDefinite("edge weight must be positive and finite");
}

Vector GcrfParams::to_log() const {
    Vector out(alpha.size() + 1);
    out.head(alpha.size()) = alpha.array().log().matrix();
    out(alpha.size()) = std::log(edge_weight);
    return out;
}

GcrfParams GcrfParams::from_log(const Vector& log_params) {
    if (log_params.size() < 2) throw InvalidArgument("log-space parameter vector needs at least two entries");
    const auto k = log_params.size() - 1;
    return {log_params.head(k).array().exp().matrix(), std::exp(log_params(k))};
}

void BaselineOutputs::validate() const {
    if (predictions.cols() == 0) throw InvalidArgument("no baseline regressors");
    if (!predictions.allFinite()) throw InvalidArgument("baseline predictions must be finite");
}

double edge_penalty(const Eigen::Ref<const Vector>& y, EdgeSpec edge) {
    const auto n = y.size();
    double total = 0.0;
    if (edge == EdgeSpec::ChainAdjacency) {
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const double d = y(i) - y(i + 1);
            total += d * d;
        }
        return total;
    }
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0) {
            const double d = y(i) - prefix / static_cast<double>(i);
            total += d * d;
        }
        prefix += y(i);
    }
    return total;
}

double energy(const Eigen::Ref<const Vector>& y, const BaselineOutputs& baselines, const GcrfParams& params,
              EdgeSpec edge) {
    require_length(y.size(), baselines.length(), "energy: y");
    require_length(params.alpha.size(), baselines.regressors(), "energy: alpha");
    if ((params.alpha.array() < 0.0).any() || params.edge_weight < 0.0)
        throw InvalidArgument("energy: weights must be non-negative");
    double variable = 0.0;
    for (Eigen::Index k = 0; k < baselines.regressors(); ++k)
        variable += params.alpha(k) * (y - baselines.predictions.col(k)).squaredNorm();
    return -variable - params.edge_weight * edge_penalty(y, edge);
}

Vector dm_running_means(const Eigen::Ref<const Vector>& y) {
    const auto n = y.size();
    require_min_length(n, 2);
    Vector means(n - 1);
    double prefix = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        prefix += y(i - 1);
        means(i - 1) = prefix / static_cast<double>(i);
    }
    return means;
}

Matrix build_A(const Vector& alpha, Eigen::Index n) {
    return Matrix::Identity(n, n) * alpha.sum();
}

Matrix build_C(EdgeSpec edge, double edge_weight, Eigen::Index n) {
    require_min_length(n, 2);
    return edge_weight * unit_edge_matrix(edge, n);
}

Vector build_linear(const Vector& alpha, const BaselineOutputs& baselines) {
    require_length(alpha.size(), baselines.regressors(), "build_linear: alpha");
    return 2.0 * baselines.predictions * alpha;
}

CanonicalGaussian assemble_canonical(const BaselineOutputs& baselines, const GcrfParams& params, EdgeSpec edge) {
    return assemble_dense(baselines, params, edge).cg;
}

double log_density(const CanonicalGaussian& cg, const Eigen::Ref<const Vector>& y) {
    require_length(y.size(), cg.size(), "log_density: y");
    const Vector r = y - cg.mean;
    return -0.5 * r.dot(cg.precision * r) - cg.log_norm;
}

LikelihoodEval log_likelihood_and_grad(const Eigen::Ref<const Vector>& y_true, const BaselineOutputs& baselines,
                                       const Vector& log_params, EdgeSpec edge) {
    require_length(log_params.size(), baselines.regressors() + 1, "log_likelihood_and_grad: log_params");
    require_length(y_true.size(), baselines.length(), "log_likelihood_and_grad: y_true");
    const GcrfParams params = GcrfParams::from_log(log_params);
    const DenseTerms terms = assemble_dense(baselines, params, edge);
    const CanonicalGaussian& cg = terms.cg;

    LikelihoodEval out;
    out.value = log_density(cg, y_true);

    // d/dp log P = -1/2 (y-mu)' P_p (y+mu) + b_p' (y-mu) + 1/2 tr(P^-1 P_p)
    // with P_p = 2I, b_p = 2 f_k for alpha_k and P_p = 2 C1, b_p = 0 for the edge weight.
    const auto n = baselines.length();
    const Matrix covariance = cg.cholesky.solve(Matrix::Identity(n, n));
    const Vector resid = y_true - cg.mean;
    const Vector sum = y_true + cg.mean;
    const auto k1 = baselines.regressors();
    out.gradient.resize(k1 + 1);
    const double trace_cov = covariance.trace();
    for (Eigen::Index k = 0; k < k1; ++k) {
        const double d = -resid.dot(sum - 2.0 * baselines.predictions.col(k)) + trace_cov;
        out.gradient(k) = params.alpha(k) * d;
    }
    const double d_edge = -resid.dot(terms.unit_edge * sum) + covariance.cwiseProduct(terms.unit_edge).sum();
    out.gradient(k1) = params.edge_weight * d_edge;
    return out;
}

EdgeSpectrum EdgeSpectrum::compute(EdgeSpec edge, Eigen::Index n) {
    require_min_length(n, 2);
    EdgeSpectrum s;
    s.edge = edge;
    if (edge == EdgeSpec::ChainAdjacency) {
        // Path-graph Laplacian: lambda_k = 4 sin^2(pi k / 2n), cosine eigenvectors.
        s.eigenvalues.resize(n);
        s.eigenvectors.resize(n, n);
        const double nd = static_cast<double>(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double half = std::sin(std::numbers::pi * static_cast<double>(k) / (2.0 * nd));
            s.eigenvalues(k) = 4.0 * half * half;
            const double scale = k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
            for (Eigen::Index j = 0; j < n; ++j)
                s.eigenvectors(j, k) =
                    scale * std::cos(std::numbers::pi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) / nd);
        }
        return s;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(unit_edge_matrix(edge, n));
    if (solver.info() != Eigen::Success) throw SolveFailure("eigendecomposition of the edge matrix failed");
    s.eigenvalues = solver.eigenvalues().cwiseMax(0.0);
    s.eigenvectors = solver.eigenvectors();
    return s;
}

SpectralObjective::SpectralObjective(const Vector& y_true, const BaselineOutputs& baselines,
                                     std::shared_ptr<const EdgeSpectrum> spectrum)
    : spectrum_(std::move(spectrum)) {
    baselines.validate();
    if (!spectrum_) throw InvalidArgument("SpectralObjective: missing spectrum");
    require_length(y_true.size(), baselines.length(), "SpectralObjective: y_true");
    require_length(spectrum_->size(), baselines.length(), "SpectralObjective: spectrum");
    if (!y_true.allFinite()) throw NonFiniteObjective("training targets must be finite");
    rotated_targets_ = spectrum_->eigenvectors.transpose() * y_true;
    rotated_baselines_ = spectrum_->eigenvectors.transpose() * baselines.predictions;
}

LikelihoodEval SpectralObjective::evaluate(const Vector& log_params) const {
    require_length(log_params.size(), parameter_count(), "SpectralObjective: log_params");
    const GcrfParams params = GcrfParams::from_log(log_params);
    params.validate();
    const auto n = rotated_targets_.size();
    const auto k1 = rotated_baselines_.cols();
    const Eigen::ArrayXd& lambda = spectrum_->eigenvalues.array();

    const Eigen::ArrayXd p = 2.0 * (params.alpha.sum() + params.edge_weight * lambda);
    if ((p <= 0.0).any() || !p.allFinite()) throw NotPositiveDefinite("precision matrix is not positive definite");
    const Eigen::ArrayXd b = 2.0 * (rotated_baselines_ * params.alpha).array();
    const Eigen::ArrayXd mu = b / p;
    const Eigen::ArrayXd resid = rotated_targets_.array() - mu;
    const Eigen::ArrayXd sum = rotated_targets_.array() + mu;

    LikelihoodEval out;
    out.value = -0.5 * (p * resid.square()).sum() - 0.5 * static_cast<double>(n) * kLog2Pi + 0.5 * p.log().sum();
    out.gradient.resize(k1 + 1);
    const double trace_cov = p.inverse().sum();
    for (Eigen::Index k = 0; k < k1; ++k) {
        const double d = -(resid * (sum - 2.0 * rotated_baselines_.col(k).array())).sum() + trace_cov;
        out.gradient(k) = params.alpha(k) * d;
    }
    out.gradient(k1) = params.edge_weight * (-(lambda * resid * sum).sum() + (lambda / p).sum());
    if (!std::isfinite(out.value) || !out.gradient.allFinite())
        throw NonFiniteObjective("log-likelihood evaluated to a non-finite value");
    return out;
}

Matrix SpectralObjective::fisher_information(const Vector& log_params) const {
    require_length(log_params.size(), parameter_count(), "SpectralObjective: log_params");
    const GcrfParams params = GcrfParams::from_log(log_params);
    params.validate();
    const auto k1 = rotated_baselines_.cols();
    const Eigen::ArrayXd& lambda = spectrum_->eigenvalues.array();
    const Eigen::ArrayXd p = 2.0 * (params.alpha.sum() + params.edge_weight * lambda);
    const Eigen::ArrayXd mu = 2.0 * (rotated_baselines_ * params.alpha).array() / p;

    // Everything is diagonal in the eigenbasis. For a parameter with precision
    // derivative dp and linear-term derivative db, the mean moves by (db - mu dp) / p.
    // F_ij = sum p dmu_i dmu_j + 1/2 sum dp_i dp_j / p^2
    const auto count = k1 + 1;
    Matrix dp(p.size(), count);
    Matrix dmu(p.size(), count);
    for (Eigen::Index k = 0; k < k1; ++k) {
        const double a = params.alpha(k);
        dp.col(k).setConstant(2.0 * a);
        dmu.col(k) = ((2.0 * a * rotated_baselines_.col(k).array() - mu * 2.0 * a) / p).matrix();
    }
    dp.col(k1) = (2.0 * params.edge_weight * lambda).matrix();
    dmu.col(k1) = (-mu * dp.col(k1).array() / p).matrix();

    const Eigen::VectorXd inv_p2 = p.square().inverse().matrix();
    Matrix fisher = dmu.transpose() * p.matrix().asDiagonal() * dmu;
    fisher.noalias() += 0.5 * dp.transpose() * inv_p2.asDiagonal() * dp;
    return fisher;
}

}  // namespace dmcrf
