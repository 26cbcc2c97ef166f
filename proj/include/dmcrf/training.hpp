#pragma once

#include "dmcrf/gcrf.hpp"

#include <memory>
#include <vector>

namespace dmcrf {

/// Search direction for the ascent.
///   GradientAscent: the raw log-space gradient.
///   FisherScoring: the gradient preconditioned by the Fisher information
///   (natural gradient). The step is capped at 1, the scoring step.
enum class Optimizer { GradientAscent, FisherScoring };

struct TrainConfig {
    Optimizer optimizer = Optimizer::FisherScoring;
    double learning_rate = 0.1;  // initial step
    int max_iters = 500;
    double rel_tol = 1e-6;
    double init_alpha = 1.0;
    double init_edge_weight = 0.01;

    void validate() const;
};

struct FitResult {
    GcrfParams params;
    double final_log_likelihood = 0.0;
    int iterations_used = 0;
    std::vector<double> trajectory;  // initial value first, then one entry per accepted step
    bool converged = false;
    Vector final_gradient;           // log-space gradient at the returned parameters
};

/// Maximum-likelihood weights by gradient ascent in log-parameter space.
///
/// Each iteration tries the current step along the search direction and
/// halves it until the log-likelihood does not decrease, so the trajectory is
/// monotone. An accepted step doubles the next trial step. The run is converged when the
/// relative improvement drops below rel_tol and the gradient is small
/// (max-norm <= 10 * rel_tol * |log-likelihood|).
///
/// `spectrum` may be shared across fits of the same length and edge variant;
/// it is computed on demand when null.
FitResult fit(const Vector& train_targets, const BaselineOutputs& baselines, EdgeSpec edge,
              const TrainConfig& config, std::shared_ptr<const EdgeSpectrum> spectrum = nullptr);

}  // namespace dmcrf
