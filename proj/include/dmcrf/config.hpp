#pragma once

#include "dmcrf/dataset.hpp"
#include "dmcrf/elm.hpp"
#include "dmcrf/gcrf.hpp"
#include "dmcrf/training.hpp"

#include <filesystem>
#include <vector>

namespace dmcrf {

/// Run configuration read from a JSON file. Relative paths resolve against
/// the directory holding the config file. See configs/synthetic.json.
struct AppConfig {
    std::filesystem::path dataset_path;
    CsvSchema schema;
    double train_fraction = 0.7;
    int baseline_folds = 5;
    TrainConfig training;
    ElmConfig baseline{1.0, 100.0};
    std::vector<EdgeSpec> edges{EdgeSpec::ChainAdjacency, EdgeSpec::DistanceToMean};
    std::vector<ElmConfig> grid = scenario_grid();
    unsigned jobs = 1;
    std::filesystem::path output_dir = "out";
};

/// Throws dmcrf::Error with the offending key on malformed input or unknown keys.
AppConfig load_config(const std::filesystem::path& path);

}  // namespace dmcrf
