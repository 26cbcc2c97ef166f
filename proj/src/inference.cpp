#include "dmcrf/inference.hpp"

namespace dmcrf {

namespace {

// diag(P^-1) = column norms of L^-1 where P = L L'.
Vector covariance_diagonal(const CanonicalGaussian& cg) {
    const auto n = cg.size();
    const Matrix l_inv = cg.cholesky.matrixL().solve(Matrix::Identity(n, n));
    return l_inv.colwise().squaredNorm().transpose();
}

}  // namespace

Vector predict(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge) {
    return assemble_canonical(test_baselines, params, edge).mean;
}

Vector predictive_variance(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge) {
    return covariance_diagonal(assemble_canonical(test_baselines, params, edge));
}

Prediction predict_with_variance(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge) {
    const CanonicalGaussian cg = assemble_canonical(test_baselines, params, edge);
    return {cg.mean, covariance_diagonal(cg)};
}

}  // namespace dmcrf
