#include "dmcrf/training.hpp"

#include "dmcrf/errors.hpp"

#include <cmath>
#include <limits>

namespace dmcrf {

namespace {

constexpr int kMaxHalvings = 60;

Vector search_direction(const SpectralObjective& objective, const Vector& theta, const LikelihoodEval& at,
                        Optimizer optimizer) {
    if (optimizer == Optimizer::GradientAscent) return at.gradient;
    const Eigen::LDLT<Matrix> ldlt(objective.fisher_information(theta));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Vector d = ldlt.solve(at.gradient);
        // A near-singular Fisher matrix can point downhill; fall back to the gradient.
        if (d.allFinite() && d.dot(at.gradient) > 0.0) return d;
    }
    return at.gradient;
}

bool stationary(const LikelihoodEval& e, double rel_tol) {
    return e.gradient.lpNorm<Eigen::Infinity>() <= 10.0 * rel_tol * std::abs(e.value);
}

}  // namespace

void TrainConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(learning_rate)) throw InvalidArgument("learning_rate must be positive");
    if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    if (!positive(rel_tol)) throw InvalidArgument("rel_tol must be positive");
    if (!positive(init_alpha)) throw NotPositiveDefinite("init_alpha must be positive");
    if (!positive(init_edge_weight)) throw NotPositiveDefinite("init_edge_weight must be positive");
}

FitResult fit(const Vector& train_targets, const BaselineOutputs& baselines, EdgeSpec edge,
              const TrainConfig& config, std::shared_ptr<const EdgeSpectrum> spectrum) {
    config.validate();
    if (train_targets.size() < 2) throw SequenceTooShort(static_cast<std::size_t>(train_targets.size()), 2);
    if (!spectrum) spectrum = std::make_shared<const EdgeSpectrum>(EdgeSpectrum::compute(edge, train_targets.size()));
    if (spectrum->edge != edge) throw InvalidArgument("fit: spectrum was computed for a different edge variant");
    const SpectralObjective objective(train_targets, baselines, spectrum);

    GcrfParams init;
    init.alpha = Vector::Constant(baselines.regressors(), config.init_alpha);
    init.edge_weight = config.init_edge_weight;
    Vector theta = init.to_log();
    LikelihoodEval current = objective.evaluate(theta);

    FitResult result;
    result.trajectory.push_back(current.value);
    const double max_step =
        config.optimizer == Optimizer::FisherScoring ? 1.0 : std::numeric_limits<double>::infinity();
    double step = std::min(config.learning_rate, max_step);
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const Vector direction = search_direction(objective, theta, current, config.optimizer);
        bool accepted = false;
        Vector candidate;
        LikelihoodEval trial;
        for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
            candidate = theta + step * direction;
            try {
                trial = objective.evaluate(candidate);
            } catch (const NotPositiveDefinite&) {
                continue;
            } catch (const NonFiniteObjective&) {
                continue;
            }
            if (trial.value >= current.value) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No representable step improves the objective.
            result.converged = stationary(current, config.rel_tol);
            break;
        }
        const double previous = current.value;
        theta = candidate;
        current = trial;
        result.trajectory.push_back(current.value);
        result.iterations_used = iter;
        step = std::min(2.0 * step, max_step);

        const double rel_change = (current.value - previous) / std::max(std::abs(previous), 1e-300);
        if (rel_change < config.rel_tol && stationary(current, config.rel_tol)) {
            result.converged = true;
            break;
        }
    }

    result.params = GcrfParams::from_log(theta);
    result.final_log_likelihood = current.value;
    result.final_gradient = current.gradient;
    return result;
}

}  // namespace dmcrf
