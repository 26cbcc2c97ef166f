#pragma once

#include "dmcrf/dataset.hpp"
#include "dmcrf/elm.hpp"
#include "dmcrf/gcrf.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace dmcrf {

/// Everything needed to predict from a raw CSV with a trained CRF.
struct GcrfModel {
    EdgeSpec edge = EdgeSpec::ChainAdjacency;
    GcrfParams params;
    CsvSchema schema;
    ScalingParams scaling;
    /// Baseline model file, relative to the directory of the model file.
    std::string baseline_file;
    double train_log_likelihood = 0.0;
    int train_iterations = 0;
    bool train_converged = false;
};

/// Plain-text `key = value` files. Numbers use the shortest decimal form that
/// reads back to the identical double; lists are comma-separated.
void save_model(const GcrfModel& model, const std::filesystem::path& path);
GcrfModel load_model(const std::filesystem::path& path);

void save_baseline(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_baseline(const std::filesystem::path& path);

/// Parsed key/value file; duplicate keys are rejected.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace dmcrf
