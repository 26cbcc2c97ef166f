#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dmcrf {

/// Base class for every error raised by the library. Catch this at
/// program boundaries; catch the derived types when the kind matters.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string column);
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// Bad cell in a CSV file. `row` counts data rows from 1 (the header is row 0).
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::string column, const std::string& detail);
    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("dataset has no data rows") {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DegenerateSplit : public Error {
public:
    using Error::Error;
};

class SolveFailure : public Error {
public:
    using Error::Error;
};

class SequenceTooShort : public Error {
public:
    SequenceTooShort(std::size_t got, std::size_t needed);
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NonFiniteObjective : public Error {
public:
    using Error::Error;
};

/// MAPE is undefined where the true target is zero.
class ZeroTarget : public Error {
public:
    explicit ZeroTarget(std::size_t index);
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Wraps a failure inside one benchmark scenario (1-based index).
class ScenarioError : public Error {
public:
    ScenarioError(std::size_t scenario, const std::string& what);
    std::size_t scenario() const noexcept { return scenario_; }

private:
    std::size_t scenario_;
};

}  // namespace dmcrf
