#include "dmcrf/model_io.hpp"

#include "dmcrf/errors.hpp"

#include <fstream>
#include <sstream>

namespace dmcrf {

namespace {

constexpr const char* kModelFormat = "dmcrf-model/1";
constexpr const char* kBaselineFormat = "dmcrf-elm/1";

std::string join_numbers(const Eigen::Ref<const Vector>& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v(i));
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

class KeyValues {
public:
    KeyValues(std::map<std::string, std::string> values, std::string origin)
        : values_(std::move(values)), origin_(std::move(origin)) {}

    const std::string& text(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw Error(origin_ + ": missing key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const {
        double v = 0.0;
        if (!parse_double(text(key), v)) throw Error(origin_ + ": key '" + key + "' is not a finite number");
        return v;
    }

    long integer(const std::string& key) const {
        const double v = number(key);
        if (v != static_cast<double>(static_cast<long>(v)))
            throw Error(origin_ + ": key '" + key + "' is not an integer");
        return static_cast<long>(v);
    }

    Vector numbers(const std::string& key) const {
        const auto items = split_list(text(key));
        Vector out(static_cast<Eigen::Index>(items.size()));
        for (std::size_t i = 0; i < items.size(); ++i)
            if (!parse_double(items[i], out(static_cast<Eigen::Index>(i))))
                throw Error(origin_ + ": key '" + key + "' has a non-numeric entry");
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (!out.emplace(key, trim(t.substr(eq + 1))).second)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return out;
}

void save_model(const GcrfModel& model, const std::filesystem::path& path) {
    Vector fmin(static_cast<Eigen::Index>(model.scaling.features.size()));
    Vector fmax(fmin.size());
    for (std::size_t j = 0; j < model.scaling.features.size(); ++j) {
        fmin(static_cast<Eigen::Index>(j)) = model.scaling.features[j].min;
        fmax(static_cast<Eigen::Index>(j)) = model.scaling.features[j].max;
    }
    std::ostringstream out;
    out << "format = " << kModelFormat << '\n'
        << "edge = " << to_string(model.edge) << '\n'
        << "alpha = " << join_numbers(model.params.alpha) << '\n'
        << "edge_weight = " << format_double(model.params.edge_weight) << '\n'
        << "schema.timestamp = " << model.schema.timestamp << '\n'
        << "schema.features = " << join_strings(model.schema.features) << '\n'
        << "schema.target = " << model.schema.target << '\n'
        << "scaling.feature_min = " << join_numbers(fmin) << '\n'
        << "scaling.feature_max = " << join_numbers(fmax) << '\n'
        << "scaling.target_min = " << format_double(model.scaling.target.min) << '\n'
        << "scaling.target_max = " << format_double(model.scaling.target.max) << '\n'
        << "baseline = " << model.baseline_file << '\n'
        << "train.log_likelihood = " << format_double(model.train_log_likelihood) << '\n'
        << "train.iterations = " << model.train_iterations << '\n'
        << "train.converged = " << (model.train_converged ? "true" : "false") << '\n';
    write_file(path, out.str());
}

GcrfModel load_model(const std::filesystem::path& path) {
    const KeyValues kv(read_key_values(path), path.string());
    if (kv.text("format") != kModelFormat)
        throw Error(path.string() + ": unsupported model format '" + kv.text("format") + "'");
    GcrfModel model;
    model.edge = parse_edge(kv.text("edge"));
    model.params.alpha = kv.numbers("alpha");
    model.params.edge_weight = kv.number("edge_weight");
    model.params.validate();
    model.schema.timestamp = kv.text("schema.timestamp");
    model.schema.features = split_list(kv.text("schema.features"));
    model.schema.target = kv.text("schema.target");
    const Vector fmin = kv.numbers("scaling.feature_min");
    const Vector fmax = kv.numbers("scaling.feature_max");
    if (fmin.size() != fmax.size() || fmin.size() != static_cast<Eigen::Index>(model.schema.features.size()))
        throw Error(path.string() + ": scaling entries do not match the feature schema");
    for (Eigen::Index j = 0; j < fmin.size(); ++j) model.scaling.features.push_back({fmin(j), fmax(j)});
    model.scaling.target = {kv.number("scaling.target_min"), kv.number("scaling.target_max")};
    model.baseline_file = kv.text("baseline");
    model.train_log_likelihood = kv.number("train.log_likelihood");
    model.train_iterations = static_cast<int>(kv.integer("train.iterations"));
    model.train_converged = kv.text("train.converged") == "true";
    return model;
}

void save_baseline(const BaselineModel& model, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "format = " << kBaselineFormat << '\n'
        << "kernel_param = " << format_double(model.config.kernel_param) << '\n'
        << "reg_coeff = " << format_double(model.config.reg_coeff) << '\n'
        << "rows = " << model.train_inputs.rows() << '\n'
        << "cols = " << model.train_inputs.cols() << '\n'
        << "dual = " << join_numbers(model.dual_coeffs) << '\n';
    for (Eigen::Index i = 0; i < model.train_inputs.rows(); ++i)
        out << "input." << i << " = " << join_numbers(model.train_inputs.row(i).transpose()) << '\n';
    write_file(path, out.str());
}

BaselineModel load_baseline(const std::filesystem::path& path) {
    const KeyValues kv(read_key_values(path), path.string());
    if (kv.text("format") != kBaselineFormat)
        throw Error(path.string() + ": unsupported baseline format '" + kv.text("format") + "'");
    BaselineModel model;
    model.config = {kv.number("kernel_param"), kv.number("reg_coeff")};
    model.config.validate();
    const long rows = kv.integer("rows");
    const long cols = kv.integer("cols");
    if (rows < 1 || cols < 1) throw Error(path.string() + ": bad baseline dimensions");
    model.dual_coeffs = kv.numbers("dual");
    if (model.dual_coeffs.size() != rows) throw Error(path.string() + ": dual coefficient count mismatch");
    model.train_inputs.resize(rows, cols);
    for (long i = 0; i < rows; ++i) {
        const Vector row = kv.numbers("input." + std::to_string(i));
        if (row.size() != cols) throw Error(path.string() + ": input row " + std::to_string(i) + " has wrong width");
        model.train_inputs.row(i) = row.transpose();
    }
    return model;
}

}  // namespace dmcrf
