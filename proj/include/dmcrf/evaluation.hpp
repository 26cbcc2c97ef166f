#pragma once

#include "dmcrf/dataset.hpp"
#include "dmcrf/elm.hpp"
#include "dmcrf/training.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dmcrf {

enum class Method { Elm = 0, Ccrf = 1, DmCcrf = 2 };

std::string_view to_string(Method m);

/// Mean absolute percentage error, in percent.
double mape(const Eigen::Ref<const Vector>& y_true, const Eigen::Ref<const Vector>& y_pred);

struct MapeTriple {
    double elm = 0.0;
    double ccrf = 0.0;
    double dm = 0.0;
};

struct ScenarioRow {
    std::size_t scenario = 0;  // 1-based
    std::optional<ElmConfig> config;
    MapeTriple mape;
    Method winner = Method::DmCcrf;

    double ccrf_gain() const { return mape.elm - mape.ccrf; }
    double dm_gain() const { return mape.elm - mape.dm; }
};

struct EvalReport {
    std::vector<ScenarioRow> rows;
    MapeTriple average;
    std::array<int, 3> wins{};  // indexed by Method
};

/// Lowest MAPE wins; exact ties go to DM-CCRF, then CCRF, then ELM.
Method row_winner(const MapeTriple& t);

EvalReport head_to_head(const std::vector<MapeTriple>& rows);

/// Aligned plain-text table: one row per scenario, then Average and Head-to-head.
std::string render_table(const EvalReport& report);

/// scenario,elm_mape,ccrf_mape,dm_mape,winner
std::string render_csv(const EvalReport& report);

struct BenchmarkOptions {
    unsigned jobs = 1;
    /// Baseline predictions on the training split used to fit the CRF weights
    /// come from this many chronological folds (see out_of_fold_predictions).
    int baseline_folds = 5;
};

/// Full protocol per scenario: scale on train, fit the kernel ELM, fit the
/// chain and distance-to-mean CRFs on the training sequence against
/// out-of-fold baseline predictions, predict the test sequence jointly from
/// the full-data ELM, and score all three in original target units.
/// Rows come back in grid order whatever the completion order.
EvalReport run_scenarios(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                         const std::vector<ElmConfig>& grid, const TrainConfig& train_cfg,
                         const BenchmarkOptions& options = {});

}  // namespace dmcrf
