#include "dmcrf/dataset.hpp"

#include "dmcrf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace dmcrf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

// Numeric timestamps compare numerically, anything else lexicographically.
bool timestamp_before(const std::string& a, const std::string& b) {
    double x = 0.0;
    double y = 0.0;
    if (parse_double(a, x) && parse_double(b, y)) return x < y;
    return a < b;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

double ColumnRange::scale(double v) const {
    if (constant()) return 0.0;
    return std::clamp((v - min) / (max - min), 0.0, 1.0);
}

double ColumnRange::unscale(double s) const {
    return min + s * (max - min);
}

void TimeSeriesDataset::validate() const {
    if (features.rows() == 0) throw EmptyDataset();
    if (static_cast<Eigen::Index>(timestamps.size()) != features.rows())
        throw DimensionMismatch("timestamp count does not match feature rows");
    if (targets.size() != 0 && targets.size() != features.rows())
        throw DimensionMismatch("target count does not match feature rows");
}

TimeSeriesDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                           const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw EmptyDataset();
    const auto header = split_commas(line);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(header[i]), i);

    auto column_of = [&](const std::string& name) {
        const auto it = index.find(name);
        if (it == index.end()) throw MissingColumn(name);
        return it->second;
    };
    const std::size_t ts_col = column_of(schema.timestamp);
    std::vector<std::size_t> feature_cols;
    for (const auto& f : schema.features) feature_cols.push_back(column_of(f));
    std::optional<std::size_t> target_col;
    if (options.require_target || index.count(schema.target)) target_col = column_of(schema.target);

    TimeSeriesDataset data;
    data.schema = schema;
    std::vector<double> feature_values;
    std::vector<double> target_values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw ParseError(row, schema.timestamp,
                             "expected " + std::to_string(header.size()) + " cells, found " +
                                 std::to_string(cells.size()));
        data.timestamps.emplace_back(cells[ts_col]);
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            double v = 0.0;
            if (!parse_double(cells[feature_cols[j]], v))
                throw ParseError(row, schema.features[j],
                                 "'" + std::string(cells[feature_cols[j]]) + "' is not a finite real");
            feature_values.push_back(v);
        }
        if (target_col) {
            double v = 0.0;
            if (!parse_double(cells[*target_col], v))
                throw ParseError(row, schema.target,
                                 "'" + std::string(cells[*target_col]) + "' is not a finite real");
            target_values.push_back(v);
        }
        if (row > 1 && timestamp_before(data.timestamps[row - 1], data.timestamps[row - 2]))
            throw ParseError(row, schema.timestamp, "timestamps must be non-decreasing");
    }
    if (row == 0) throw EmptyDataset();

    const auto n = static_cast<Eigen::Index>(row);
    const auto d = static_cast<Eigen::Index>(feature_cols.size());
    data.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        feature_values.data(), n, d);
    if (target_col) data.targets = Eigen::Map<const Vector>(target_values.data(), n);
    return data;
}

void write_csv(const TimeSeriesDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV file '" + path.string() + "'");
    out << data.schema.timestamp;
    for (const auto& f : data.schema.features) out << ',' << f;
    if (data.targets.size() > 0) out << ',' << data.schema.target;
    out << '\n';
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        out << data.timestamps[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < data.dims(); ++j) out << ',' << format_double(data.features(i, j));
        if (data.targets.size() > 0) out << ',' << format_double(data.targets(i));
        out << '\n';
    }
}

ScalingParams scale_fit(const TimeSeriesDataset& train) {
    train.validate();
    ScalingParams params;
    for (Eigen::Index j = 0; j < train.dims(); ++j)
        params.features.push_back({train.features.col(j).minCoeff(), train.features.col(j).maxCoeff()});
    if (train.targets.size() > 0) params.target = {train.targets.minCoeff(), train.targets.maxCoeff()};
    return params;
}

TimeSeriesDataset scale_apply(const TimeSeriesDataset& data, const ScalingParams& params) {
    if (static_cast<Eigen::Index>(params.features.size()) != data.dims())
        throw DimensionMismatch("scaling parameters cover " + std::to_string(params.features.size()) +
                                " feature columns, data has " + std::to_string(data.dims()));
    TimeSeriesDataset out = data;
    for (Eigen::Index j = 0; j < data.dims(); ++j) {
        const auto& range = params.features[static_cast<std::size_t>(j)];
        out.features.col(j) = data.features.col(j).unaryExpr([&](double v) { return range.scale(v); });
    }
    out.targets = data.targets.unaryExpr([&](double v) { return params.target.scale(v); });
    return out;
}

TimeSeriesDataset slice_rows(const TimeSeriesDataset& data, Eigen::Index begin, Eigen::Index end) {
    TimeSeriesDataset out;
    out.schema = data.schema;
    out.timestamps.assign(data.timestamps.begin() + begin, data.timestamps.begin() + end);
    out.features = data.features.middleRows(begin, end - begin);
    if (data.targets.size() > 0) out.targets = data.targets.segment(begin, end - begin);
    return out;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> chronological_split(const TimeSeriesDataset& data,
                                                                    double train_fraction) {
    data.validate();
    const auto n = data.size();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DegenerateSplit("train fraction must lie strictly between 0 and 1, got " +
                              format_double(train_fraction));
    // The small offset keeps products like 0.7 * 10 from rounding up past an exact integer.
    const auto n_train = static_cast<Eigen::Index>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    if (n_train < 1 || n_train >= n)
        throw DegenerateSplit("split of " + std::to_string(n) + " rows at fraction " +
                              format_double(train_fraction) + " leaves an empty side");
    return {slice_rows(data, 0, n_train), slice_rows(data, n_train, n)};
}

}  // namespace dmcrf
