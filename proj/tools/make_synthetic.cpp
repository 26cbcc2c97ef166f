// Writes the synthetic AR(1) fixture as CSV.
#include "dmcrf/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"generate the synthetic AR(1) traffic fixture"};
    dmcrf::SyntheticConfig cfg;
    std::string output;
    app.add_option("--output", output, "CSV path")->required();
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--rows", cfg.rows, "number of rows")->check(CLI::PositiveNumber);
    app.add_option("--phi", cfg.phi, "AR(1) coefficient");
    app.add_option("--noise", cfg.feature_noise, "feature noise multiplier");
    CLI11_PARSE(app, argc, argv);
    try {
        dmcrf::write_csv(dmcrf::make_synthetic_ar1(cfg), output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
