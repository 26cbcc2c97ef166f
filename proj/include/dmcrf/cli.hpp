#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace dmcrf::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::string> edge;  // chain | dm | both
    std::optional<unsigned> jobs;
    std::optional<std::filesystem::path> output_dir;
};

int cmd_train(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
              std::ostream& err);
int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& input_csv,
                const std::filesystem::path& output_csv, std::ostream& err);
int cmd_benchmark(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                  std::ostream& err);
/// Writes the scenario grid as CSV: scenario,kernel_param,reg_coeff.
int cmd_grid(std::ostream& out);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace dmcrf::cli
