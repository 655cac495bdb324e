#pragma once

#include <stdexcept>
#include <string>

namespace purcellsim {

// Base of every error the library raises. The CLI maps the subclasses onto
// its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input that violates a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class InvalidElementError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A network evaluated to an exact short (infinite admittance).
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, std::string path)
        : Error(what + " at " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NumericOverflowError : public Error {
public:
    using Error::Error;
};

class PassivityViolationError : public Error {
public:
    using Error::Error;
};

// Zero detuning in the dispersive formula.
class ResonanceError : public Error {
public:
    using Error::Error;
};

// Sweep too coarse to resolve sweet spots.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Loss-budget extraction produced negative rates.
class InconsistentMeasurementError : public Error {
public:
    using Error::Error;
};

// Malformed field-grid input. Carries the 1-based source row when known.
class IngestionError : public ValidationError {
public:
    explicit IngestionError(const std::string& what, long row = -1)
        : ValidationError(row > 0 ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

class DegenerateFieldError : public Error {
public:
    using Error::Error;
};

}  // namespace purcellsim
