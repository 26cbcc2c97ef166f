#pragma once

#include "dmcrf/gcrf.hpp"

namespace dmcrf {

/// Joint prediction over the whole sequence: the mean of the conditional Gaussian.
Vector predict(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge);

/// Diagonal of the covariance (inverse precision).
Vector predictive_variance(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge);

struct Prediction {
    Vector mean;
    Vector variance;
};

/// Mean and marginal variances from a single factorization.
Prediction predict_with_variance(const BaselineOutputs& test_baselines, const GcrfParams& params, EdgeSpec edge);

}  // namespace dmcrf
