#include "dmcrf/cli.hpp"

#include "dmcrf/config.hpp"
#include "dmcrf/errors.hpp"
#include "dmcrf/evaluation.hpp"
#include "dmcrf/inference.hpp"
#include "dmcrf/model_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

namespace dmcrf::cli {

namespace {

namespace fs = std::filesystem;

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// Runs one pipeline stage and tags any failure with the stage name.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::vector<EdgeSpec> edges_from(const std::string& flag) {
    if (flag == "both") return {EdgeSpec::ChainAdjacency, EdgeSpec::DistanceToMean};
    return {parse_edge(flag)};
}

AppConfig load_with_overrides(const fs::path& config_path, const Overrides& overrides) {
    AppConfig cfg = stage("parse", [&] { return load_config(config_path); });
    stage("parse", [&] {
        if (overrides.edge) cfg.edges = edges_from(*overrides.edge);
        if (overrides.jobs) cfg.jobs = *overrides.jobs;
        if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
        return 0;
    });
    return cfg;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> load_and_split(const AppConfig& cfg) {
    const TimeSeriesDataset data = stage("load", [&] {
        if (!fs::exists(cfg.dataset_path)) throw Error("dataset file not found: " + cfg.dataset_path.string());
        return load_csv(cfg.dataset_path, cfg.schema);
    });
    return stage("split", [&] { return chronological_split(data, cfg.train_fraction); });
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

std::string model_filename(EdgeSpec edge) {
    return "model_" + std::string(to_string(edge)) + ".txt";
}

int report_failure(std::ostream& err, const StageError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << '\n';
    return kFailure;
}

}  // namespace

int cmd_train(const fs::path& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    try {
        const AppConfig cfg = load_with_overrides(config_path, overrides);
        const auto [train, test] = load_and_split(cfg);
        (void)test;

        const ScalingParams scaling = scale_fit(train);
        const TimeSeriesDataset train_s = scale_apply(train, scaling);
        const BaselineModel elm = stage("solve", [&] { return train_kernel_elm(train_s, cfg.baseline); });
        const BaselineOutputs f_train = stage("solve", [&] {
            return BaselineOutputs{
                out_of_fold_predictions(train_s.features, train_s.targets, cfg.baseline, cfg.baseline_folds)};
        });

        stage("write", [&] {
            fs::create_directories(cfg.output_dir);
            save_baseline(elm, cfg.output_dir / "baseline.elm");
            return 0;
        });
        for (const EdgeSpec edge : cfg.edges) {
            const FitResult result = stage("fit", [&] { return fit(train_s.targets, f_train, edge, cfg.training); });
            GcrfModel model;
            model.edge = edge;
            model.params = result.params;
            model.schema = cfg.schema;
            model.scaling = scaling;
            model.baseline_file = "baseline.elm";
            model.train_log_likelihood = result.final_log_likelihood;
            model.train_iterations = result.iterations_used;
            model.train_converged = result.converged;
            const fs::path path = cfg.output_dir / model_filename(edge);
            stage("write", [&] {
                save_model(model, path);
                return 0;
            });
            out << to_string(edge) << ": " << result.iterations_used << " iterations, log-likelihood "
                << format_double(result.final_log_likelihood) << (result.converged ? " (converged)" : "")
                << " -> " << path.string() << '\n';
        }
        return kSuccess;
    } catch (const StageError& e) {
        return report_failure(err, e);
    }
}

int cmd_predict(const fs::path& model_path, const fs::path& input_csv, const fs::path& output_csv,
                std::ostream& err) {
    try {
        const GcrfModel model = stage("parse", [&] { return load_model(model_path); });
        const BaselineModel elm =
            stage("parse", [&] { return load_baseline(model_path.parent_path() / model.baseline_file); });
        const TimeSeriesDataset input = stage("load", [&] {
            if (!fs::exists(input_csv)) throw Error("input file not found: " + input_csv.string());
            return load_csv(input_csv, model.schema, LoadOptions{.require_target = false});
        });
        const TimeSeriesDataset scaled = stage("load", [&] { return scale_apply(input, model.scaling); });

        const BaselineOutputs baselines = stage("solve", [&] {
            if (model.params.alpha.size() != 1)
                throw DimensionMismatch("model expects " + std::to_string(model.params.alpha.size()) +
                                        " baseline regressors, one is available");
            return BaselineOutputs{predict_kernel_elm(elm, scaled.features)};
        });
        const Prediction pred = stage("solve", [&] { return predict_with_variance(baselines, model.params, model.edge); });

        const ColumnRange& target = model.scaling.target;
        const double spread = target.max - target.min;
        std::ostringstream csv;
        csv << model.schema.timestamp << ",baseline,prediction,std\n";
        for (Eigen::Index i = 0; i < pred.mean.size(); ++i) {
            csv << input.timestamps[static_cast<std::size_t>(i)] << ','
                << format_double(target.unscale(baselines.predictions(i, 0))) << ','
                << format_double(target.unscale(pred.mean(i))) << ','
                << format_double(std::sqrt(pred.variance(i)) * spread) << '\n';
        }
        stage("write", [&] {
            write_text(output_csv, csv.str());
            return 0;
        });
        return kSuccess;
    } catch (const StageError& e) {
        return report_failure(err, e);
    }
}

int cmd_benchmark(const fs::path& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    try {
        const AppConfig cfg = load_with_overrides(config_path, overrides);
        const auto [train, test] = load_and_split(cfg);
        const EvalReport report = stage("benchmark", [&] {
            return run_scenarios(train, test, cfg.grid, cfg.training, BenchmarkOptions{cfg.jobs, cfg.baseline_folds});
        });
        const std::string table = render_table(report);
        stage("write", [&] {
            fs::create_directories(cfg.output_dir);
            write_text(cfg.output_dir / "report.txt", table);
            write_text(cfg.output_dir / "report.csv", render_csv(report));
            return 0;
        });
        out << table;
        return kSuccess;
    } catch (const StageError& e) {
        return report_failure(err, e);
    }
}

int cmd_grid(std::ostream& out) {
    out << "scenario,kernel_param,reg_coeff\n";
    const auto grid = scenario_grid();
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << i + 1 << ',' << format_double(grid[i].kernel_param) << ',' << format_double(grid[i].reg_coeff) << '\n';
    return kSuccess;
}

int run(int argc, char** argv) {
    CLI::App app{"Gaussian CRF structured regression for time series (chain and distance-to-mean edges)"};
    app.require_subcommand(1);

    std::string config;
    std::string model;
    std::string input;
    std::string output;
    std::string edge;
    unsigned jobs = 1;

    auto* train = app.add_subcommand("train", "fit the kernel-ELM baseline and CRF weights");
    train->add_option("--config", config, "config file")->required();
    train->add_option("--edge", edge, "edge variant(s) to fit")->check(CLI::IsMember({"chain", "dm", "both"}));
    train->add_option("--output", output, "output directory (overrides config)");

    auto* pred = app.add_subcommand("predict", "predict a CSV with a trained model");
    pred->add_option("--model", model, "model file written by train")->required();
    pred->add_option("--input", input, "input CSV")->required();
    pred->add_option("--output", output, "prediction CSV")->required();

    auto* bench = app.add_subcommand("benchmark", "run the scenario sweep and head-to-head report");
    bench->add_option("--config", config, "config file")->required();
    bench->add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::Range(1u, 1024u));
    bench->add_option("--output", output, "output directory (overrides config)");

    auto* grid = app.add_subcommand("grid", "print the fifteen baseline scenarios as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsage;
    }

    Overrides overrides;
    if (!edge.empty()) overrides.edge = edge;
    if (!output.empty()) overrides.output_dir = output;
    if (bench->count("--jobs")) overrides.jobs = jobs;

    if (*train) return cmd_train(config, overrides, std::cout, std::cerr);
    if (*pred) return cmd_predict(model, input, output, std::cerr);
    if (*grid) return cmd_grid(std::cout);
    return cmd_benchmark(config, overrides, std::cout, std::cerr);
}

}  // namespace dmcrf::cli
