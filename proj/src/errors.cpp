#include "dmcrf/errors.hpp"

namespace dmcrf {

MissingColumn::MissingColumn(std::string column)
    : Error("missing column '" + column + "'"), column_(std::move(column)) {}

ParseError::ParseError(std::size_t row, std::string column, const std::string& detail)
    : Error("parse error at row " + std::to_string(row) + ", column '" + column + "': " + detail),
      row_(row),
      column_(std::move(column)) {}

SequenceTooShort::SequenceTooShort(std::size_t got, std::size_t needed)
    : Error("sequence length " + std::to_string(got) + " is below the minimum of " +
            std::to_string(needed)) {}

ZeroTarget::ZeroTarget(std::size_t index)
    : Error("zero target at index " + std::to_string(index) + "; MAPE is undefined"),
      index_(index) {}

ScenarioError::ScenarioError(std::size_t scenario, const std::string& what)
    : Error("scenario " + std::to_string(scenario) + ": " + what), scenario_(scenario) {}

}  // namespace dmcrf
