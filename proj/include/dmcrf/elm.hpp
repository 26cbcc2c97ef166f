#pragma once

#include "dmcrf/dataset.hpp"

#include <vector>

namespace dmcrf {

/// Kernel-ELM hyperparameters: RBF width and ridge regularization coefficient.
struct ElmConfig {
    double kernel_param = 1.0;
    double reg_coeff = 1.0;

    void validate() const;
};

/// Trained kernel-ELM regressor in dual form.
struct BaselineModel {
    Matrix train_inputs;  // M x d
    Vector dual_coeffs;   // M
    ElmConfig config;
};

/// exp(-||u - v||^2 / kernel_param)
double rbf_kernel(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v, double kernel_param);

/// K(a_i, b_j) for every pair of rows.
Matrix rbf_gram(const Matrix& a, const Matrix& b, double kernel_param);

/// Solves (Omega + I / reg_coeff) * beta = y with a Cholesky factorization.
BaselineModel train_kernel_elm(const TimeSeriesDataset& train, const ElmConfig& config);
BaselineModel train_kernel_elm(const Matrix& inputs, const Vector& targets, const ElmConfig& config);

Vector predict_kernel_elm(const BaselineModel& model, const Matrix& query);

/// Predictions for every training row from a model that did not see that row.
///
/// Rows are cut into `folds` contiguous blocks in time order; block k is
/// predicted by a model trained on all other blocks. folds <= 1 falls back to
/// in-sample predictions of a model trained on everything.
Vector out_of_fold_predictions(const Matrix& inputs, const Vector& targets, const ElmConfig& config, int folds);

/// The fifteen baseline settings of the benchmark protocol, scenario 1 first.
std::vector<ElmConfig> scenario_grid();

}  // namespace dmcrf
