#pragma once

#include "dmcrf/dataset.hpp"

#include <Eigen/Cholesky>

#include <memory>
#include <string>
#include <string_view>

namespace dmcrf {

/// Which edge feature couples the outputs.
///
/// ChainAdjacency penalizes (y_i - y_{i+1})^2 between neighbours.
/// DistanceToMean penalizes (y_i - m_i)^2 where m_i is the mean of y_1..y_{i-1};
/// the first output has no history and contributes no edge term.
enum class EdgeSpec { ChainAdjacency, DistanceToMean };

std::string_view to_string(EdgeSpec edge);
/// Accepts "chain" or "dm".
EdgeSpec parse_edge(std::string_view name);

/// Feature weights. All entries must be strictly positive for the
/// distribution to be proper.
struct GcrfParams {
    Vector alpha;              // one weight per baseline regressor
    double edge_weight = 0.0;  // beta (chain) or theta (distance-to-mean)

    void validate() const;
    /// (log alpha_1, ..., log alpha_K, log edge_weight)
    Vector to_log() const;
    static GcrfParams from_log(const Vector& log_params);
};

/// Baseline predictions f_k(X_i); column k holds regressor k over the sequence.
struct BaselineOutputs {
    Matrix predictions;  // N x K

    Eigen::Index length() const { return predictions.rows(); }
    Eigen::Index regressors() const { return predictions.cols(); }
    void validate() const;
};

/// The conditional distribution written as a multivariate Gaussian:
/// density = exp(-1/2 (y-mean)' precision (y-mean) - log_norm).
struct CanonicalGaussian {
    Matrix precision;
    Vector linear;
    Vector mean;
    double log_norm = 0.0;
    Eigen::LLT<Matrix> cholesky;

    Eigen::Index size() const { return mean.size(); }
};

/// Unit-weight edge penalty computed term by term from its definition.
double edge_penalty(const Eigen::Ref<const Vector>& y, EdgeSpec edge);

/// Negative energy (log of the unnormalized density); always <= 0.
///
/// Only non-negativity of the weights is checked here so that boundary cases
/// (a zero weight) can be evaluated directly.
double energy(const Eigen::Ref<const Vector>& y, const BaselineOutputs& baselines, const GcrfParams& params,
              EdgeSpec edge);

/// m_2..m_N, the running means of the preceding outputs.
Vector dm_running_means(const Eigen::Ref<const Vector>& y);

Matrix build_A(const Vector& alpha, Eigen::Index n);

/// Matrix of the edge penalty's quadratic form: y' C y == edge_weight * edge_penalty(y).
Matrix build_C(EdgeSpec edge, double edge_weight, Eigen::Index n);

/// tau_i = 2 * sum_k alpha_k f_k(X_i)
Vector build_linear(const Vector& alpha, const BaselineOutputs& baselines);

/// precision = 2 (A + C), linear = tau, mean = precision^-1 linear.
CanonicalGaussian assemble_canonical(const BaselineOutputs& baselines, const GcrfParams& params, EdgeSpec edge);

double log_density(const CanonicalGaussian& cg, const Eigen::Ref<const Vector>& y);

struct LikelihoodEval {
    double value = 0.0;
    Vector gradient;  // with respect to the log-space parameters
};

/// Log-likelihood of `y_true` and its gradient in log-parameter space, using a
/// dense Cholesky factorization of the precision.
LikelihoodEval log_likelihood_and_grad(const Eigen::Ref<const Vector>& y_true, const BaselineOutputs& baselines,
                                       const Vector& log_params, EdgeSpec edge);

/// Eigendecomposition of the unit-weight edge matrix for one sequence length.
///
/// Since A is a multiple of the identity, the precision 2(a I + w C1) shares
/// C1's eigenvectors. Once this is computed every likelihood evaluation costs
/// O(N K) instead of a fresh O(N^3) factorization.
struct EdgeSpectrum {
    EdgeSpec edge = EdgeSpec::ChainAdjacency;
    Vector eigenvalues;   // ascending, >= 0 up to rounding
    Matrix eigenvectors;  // orthonormal columns

    static EdgeSpectrum compute(EdgeSpec edge, Eigen::Index n);
    Eigen::Index size() const { return eigenvalues.size(); }
};

/// Likelihood of one training sequence evaluated through an EdgeSpectrum.
/// Agrees with log_likelihood_and_grad to rounding error.
class SpectralObjective {
public:
    SpectralObjective(const Vector& y_true, const BaselineOutputs& baselines,
                      std::shared_ptr<const EdgeSpectrum> spectrum);

    LikelihoodEval evaluate(const Vector& log_params) const;

    /// Fisher information of the log-space parameters (expected negative Hessian).
    Matrix fisher_information(const Vector& log_params) const;
    Eigen::Index parameter_count() const { return rotated_baselines_.cols() + 1; }

private:
    std::shared_ptr<const EdgeSpectrum> spectrum_;
    Vector rotated_targets_;    // Q' y
    Matrix rotated_baselines_;  // Q' F
};

}  // namespace dmcrf
