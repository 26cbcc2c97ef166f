#include "dmcrf/evaluation.hpp"

#include "dmcrf/errors.hpp"
#include "dmcrf/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

namespace dmcrf {

namespace {

std::string fixed(double v, int precision = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Elm: return "ELM";
        case Method::Ccrf: return "CCRF";
        case Method::DmCcrf: return "DM-CCRF";
    }
    return "?";
}

double mape(const Eigen::Ref<const Vector>& y_true, const Eigen::Ref<const Vector>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw DimensionMismatch("mape: " + std::to_string(y_true.size()) + " targets vs " +
                                std::to_string(y_pred.size()) + " predictions");
    if (y_true.size() == 0) throw EmptyInput("mape: no observations");
    double total = 0.0;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) {
        if (y_true(i) == 0.0) throw ZeroTarget(static_cast<std::size_t>(i));
        total += std::abs((y_true(i) - y_pred(i)) / y_true(i));
    }
    return 100.0 / static_cast<double>(y_true.size()) * total;
}

Method row_winner(const MapeTriple& t) {
    if (t.dm <= t.ccrf && t.dm <= t.elm) return Method::DmCcrf;
    if (t.ccrf <= t.elm) return Method::Ccrf;
    return Method::Elm;
}

EvalReport head_to_head(const std::vector<MapeTriple>& rows) {
    if (rows.empty()) throw EmptyInput("head_to_head: no rows");
    EvalReport report;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& t = rows[i];
        if (!std::isfinite(t.elm) || !std::isfinite(t.ccrf) || !std::isfinite(t.dm))
            throw InvalidArgument("head_to_head: non-finite MAPE in row " + std::to_string(i + 1));
        ScenarioRow row;
        row.scenario = i + 1;
        row.mape = t;
        row.winner = row_winner(t);
        ++report.wins[static_cast<std::size_t>(row.winner)];
        report.average.elm += t.elm;
        report.average.ccrf += t.ccrf;
        report.average.dm += t.dm;
        report.rows.push_back(row);
    }
    const double n = static_cast<double>(rows.size());
    report.average.elm /= n;
    report.average.ccrf /= n;
    report.average.dm /= n;
    return report;
}

std::string render_table(const EvalReport& report) {
    const bool with_config = std::any_of(report.rows.begin(), report.rows.end(),
                                         [](const ScenarioRow& r) { return r.config.has_value(); });
    std::ostringstream out;
    out << "MAPE (%) by scenario\n";
    out << pad_right("Scenario", 13);
    if (with_config) out << pad_left("Kernel", 10) << pad_left("Reg", 10);
    out << pad_left("ELM", 11) << pad_left("CCRF", 11) << pad_left("DM-CCRF", 11) << pad_left("ELM-CCRF", 11)
        << pad_left("ELM-DM", 11) << "  Winner\n";
    for (const auto& r : report.rows) {
        out << pad_right(std::to_string(r.scenario), 13);
        if (with_config) {
            out << pad_left(r.config ? general(r.config->kernel_param) : "-", 10)
                << pad_left(r.config ? general(r.config->reg_coeff) : "-", 10);
        }
        out << pad_left(fixed(r.mape.elm), 11) << pad_left(fixed(r.mape.ccrf), 11) << pad_left(fixed(r.mape.dm), 11)
            << pad_left(fixed(r.ccrf_gain()), 11) << pad_left(fixed(r.dm_gain()), 11) << "  " << to_string(r.winner)
            << '\n';
    }
    const std::string blank = with_config ? std::string(20, ' ') : std::string();
    out << pad_right("Average", 13) << blank << pad_left(fixed(report.average.elm), 11)
        << pad_left(fixed(report.average.ccrf), 11) << pad_left(fixed(report.average.dm), 11) << '\n';
    out << pad_right("Head-to-head", 13) << blank << pad_left(std::to_string(report.wins[0]), 11)
        << pad_left(std::to_string(report.wins[1]), 11) << pad_left(std::to_string(report.wins[2]), 11) << '\n';
    return out.str();
}

std::string render_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "scenario,elm_mape,ccrf_mape,dm_mape,winner\n";
    for (const auto& r : report.rows)
        out << r.scenario << ',' << fixed(r.mape.elm, 6) << ',' << fixed(r.mape.ccrf, 6) << ','
            << fixed(r.mape.dm, 6) << ',' << to_string(r.winner) << '\n';
    return out.str();
}

EvalReport run_scenarios(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                         const std::vector<ElmConfig>& grid, const TrainConfig& train_cfg,
                         const BenchmarkOptions& options) {
    if (grid.empty()) throw EmptyInput("run_scenarios: empty scenario grid");
    train.validate();
    test.validate();
    if (train.targets.size() == 0 || test.targets.size() == 0)
        throw InvalidArgument("run_scenarios: both splits need targets");
    if (train.size() < 2) throw SequenceTooShort(static_cast<std::size_t>(train.size()), 2);
    if (test.size() < 2) throw SequenceTooShort(static_cast<std::size_t>(test.size()), 2);
    train_cfg.validate();

    const ScalingParams scaling = scale_fit(train);
    const TimeSeriesDataset train_s = scale_apply(train, scaling);
    const TimeSeriesDataset test_s = scale_apply(test, scaling);
    auto unscale = [&](const Vector& v) {
        return v.unaryExpr([&](double s) { return scaling.target.unscale(s); }).eval();
    };

    const auto chain = std::make_shared<const EdgeSpectrum>(
        EdgeSpectrum::compute(EdgeSpec::ChainAdjacency, train_s.size()));
    const auto dm = std::make_shared<const EdgeSpectrum>(
        EdgeSpectrum::compute(EdgeSpec::DistanceToMean, train_s.size()));

    std::vector<MapeTriple> triples(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    auto run_one = [&](std::size_t i) {
        const BaselineModel model = train_kernel_elm(train_s, grid[i]);
        const BaselineOutputs f_train{
            out_of_fold_predictions(train_s.features, train_s.targets, grid[i], options.baseline_folds)};
        const BaselineOutputs f_test{predict_kernel_elm(model, test_s.features)};

        const FitResult chain_fit = fit(train_s.targets, f_train, EdgeSpec::ChainAdjacency, train_cfg, chain);
        const FitResult dm_fit = fit(train_s.targets, f_train, EdgeSpec::DistanceToMean, train_cfg, dm);

        MapeTriple& t = triples[i];
        t.elm = mape(test.targets, unscale(f_test.predictions.col(0)));
        t.ccrf = mape(test.targets, unscale(predict(f_test, chain_fit.params, EdgeSpec::ChainAdjacency)));
        t.dm = mape(test.targets, unscale(predict(f_test, dm_fit.params, EdgeSpec::DistanceToMean)));
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                run_one(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(grid.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw ScenarioError(i + 1, e.what());
        }
    }

    EvalReport report = head_to_head(triples);
    for (std::size_t i = 0; i < grid.size(); ++i) report.rows[i].config = grid[i];
    return report;
}

}  // namespace dmcrf
