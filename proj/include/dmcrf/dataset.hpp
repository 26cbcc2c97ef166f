#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dmcrf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Column roles of a time-series CSV file.
struct CsvSchema {
    std::string timestamp;
    std::vector<std::string> features;
    std::string target;
};

/// Ordered observations: one row per time step.
///
/// Rows are kept in file order. Timestamps are opaque strings; they are only
/// compared to check that the series is non-decreasing.
struct TimeSeriesDataset {
    CsvSchema schema;
    std::vector<std::string> timestamps;
    Matrix features;  // N x d
    Vector targets;   // N

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dims() const { return features.cols(); }

    /// Throws DimensionMismatch / EmptyDataset when the row counts disagree or are zero.
    void validate() const;
};

struct ColumnRange {
    double min = 0.0;
    double max = 0.0;

    bool constant() const { return max == min; }
    /// Maps v into [0,1]; constant columns map to 0.
    double scale(double v) const;
    double unscale(double s) const;
};

/// Min-max parameters per feature column plus the target column.
struct ScalingParams {
    std::vector<ColumnRange> features;
    ColumnRange target;
};

struct LoadOptions {
    /// When false the target column may be absent; targets are then left empty (size 0)
    /// and features are still required.
    bool require_target = true;
};

TimeSeriesDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                           const LoadOptions& options = {});

/// Writes the dataset back out with shortest round-trip number formatting.
void write_csv(const TimeSeriesDataset& data, const std::filesystem::path& path);

ScalingParams scale_fit(const TimeSeriesDataset& train);

/// (v - min) / (max - min), clamped to [0,1]; constant columns become 0.
TimeSeriesDataset scale_apply(const TimeSeriesDataset& data, const ScalingParams& params);

/// First ceil(train_fraction * N) rows form the training split.
std::pair<TimeSeriesDataset, TimeSeriesDataset> chronological_split(const TimeSeriesDataset& data,
                                                                    double train_fraction);

/// Row range [begin, end) as a new dataset.
TimeSeriesDataset slice_rows(const TimeSeriesDataset& data, Eigen::Index begin, Eigen::Index end);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of a finite real; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);

}  // namespace dmcrf
