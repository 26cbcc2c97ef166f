#include "dmcrf/elm.hpp"

#include "dmcrf/errors.hpp"

#include <cmath>

namespace dmcrf {

void ElmConfig::validate() const {
    if (!(std::isfinite(kernel_param) && kernel_param > 0.0))
        throw InvalidArgument("kernel parameter must be positive and finite");
    if (!(std::isfinite(reg_coeff) && reg_coeff > 0.0))
        throw InvalidArgument("regularization coefficient must be positive and finite");
}

double rbf_kernel(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v, double kernel_param) {
    if (u.size() != v.size())
        throw DimensionMismatch("rbf_kernel: vectors of length " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()));
    if (!(kernel_param > 0.0)) throw InvalidArgument("rbf_kernel: kernel parameter must be positive");
    return std::exp(-(u - v).squaredNorm() / kernel_param);
}

Matrix rbf_gram(const Matrix& a, const Matrix& b, double kernel_param) {
    if (a.cols() != b.cols())
        throw DimensionMismatch("rbf_gram: inputs have " + std::to_string(a.cols()) + " and " +
                                std::to_string(b.cols()) + " columns");
    // Direct differences rather than the expanded norm: no cancellation, and
    // K(a, a) comes out exactly symmetric with a unit diagonal.
    Matrix g(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            g(i, j) = std::exp(-(a.row(i) - b.row(j)).squaredNorm() / kernel_param);
    return g;
}

BaselineModel train_kernel_elm(const Matrix& inputs, const Vector& targets, const ElmConfig& config) {
    config.validate();
    if (inputs.rows() == 0) throw EmptyDataset();
    if (inputs.rows() != targets.size()) throw DimensionMismatch("train_kernel_elm: inputs and targets differ in length");

    Matrix system = rbf_gram(inputs, inputs, config.kernel_param);
    system.diagonal().array() += 1.0 / config.reg_coeff;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() != Eigen::Success)
        throw SolveFailure("regularized Gram matrix is not numerically positive definite");
    BaselineModel model{inputs, llt.solve(targets), config};
    if (!model.dual_coeffs.allFinite()) throw SolveFailure("kernel-ELM solve produced non-finite coefficients");
    return model;
}

BaselineModel train_kernel_elm(const TimeSeriesDataset& train, const ElmConfig& config) {
    train.validate();
    return train_kernel_elm(train.features, train.targets, config);
}

Vector predict_kernel_elm(const BaselineModel& model, const Matrix& query) {
    if (query.cols() != model.train_inputs.cols())
        throw DimensionMismatch("predict_kernel_elm: query has " + std::to_string(query.cols()) +
                                " columns, model expects " + std::to_string(model.train_inputs.cols()));
    return rbf_gram(query, model.train_inputs, model.config.kernel_param) * model.dual_coeffs;
}

Vector out_of_fold_predictions(const Matrix& inputs, const Vector& targets, const ElmConfig& config, int folds) {
    const auto n = inputs.rows();
    if (n != targets.size()) throw DimensionMismatch("out_of_fold_predictions: inputs and targets differ in length");
    if (folds <= 1) return predict_kernel_elm(train_kernel_elm(inputs, targets, config), inputs);
    if (folds > n) throw InvalidArgument("out_of_fold_predictions: more folds than rows");

    Vector out(n);
    for (int k = 0; k < folds; ++k) {
        const Eigen::Index begin = n * k / folds;
        const Eigen::Index end = n * (k + 1) / folds;
        const Eigen::Index rest = n - (end - begin);
        Matrix x(rest, inputs.cols());
        Vector y(rest);
        x << inputs.topRows(begin), inputs.bottomRows(n - end);
        y << targets.head(begin), targets.tail(n - end);
        const BaselineModel model = train_kernel_elm(x, y, config);
        out.segment(begin, end - begin) = predict_kernel_elm(model, inputs.middleRows(begin, end - begin));
    }
    return out;
}

std::vector<ElmConfig> scenario_grid() {
    std::vector<ElmConfig> grid;
    for (double c : {1.0, 5.0, 10.0, 50.0, 100.0, 500.0, 1000.0, 10000.0, 1000000.0}) grid.push_back({1.0, c});
    for (double c : {5.0, 10.0, 50.0, 100.0, 1000.0, 10000.0}) grid.push_back({1000000.0, c});
    return grid;
}

}  // namespace dmcrf
