#pragma once

#include <stdexcept>
#include <string>

namespace admit {

// Base class for every error raised by the library. Refusals are not errors;
// they are ordinary return values (see interpret.hpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A vector too short to carry a direction.
class ZeroVectorError : public Error {
public:
    ZeroVectorError() : Error("zero vector has no direction") {}
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ToleranceOutOfRange : public PreconditionError {
public:
    explicit ToleranceOutOfRange(double tol)
        : PreconditionError("feasibility tolerance out of range (0, 1e-3]: " + std::to_string(tol)) {}
};

class EmptySampleBudget : public Error {
public:
    using Error::Error;
};

class ConfigParseError : public Error {
public:
    ConfigParseError(std::string field, std::size_t line, const std::string& what)
        : Error(format(field, line, what)), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    // 1-based; 0 when the error is not tied to a source line.
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, std::size_t line, const std::string& what) {
        std::string out = "config error";
        if (line > 0) out += " at line " + std::to_string(line);
        if (!field.empty()) out += " in '" + field + "'";
        return out + ": " + what;
    }

    std::string field_;
    std::size_t line_;
};

class BothEmpty : public PreconditionError {
public:
    BothEmpty() : PreconditionError("both witness sets are empty") {}
};

class EmptySet : public PreconditionError {
public:
    EmptySet() : PreconditionError("witness set is empty") {}
};

class MissingExtractor : public Error {
public:
    explicit MissingExtractor(const std::string& id)
        : Error("no feature extractor registered for '" + id + "'") {}
};

class CsvError : public Error {
public:
    CsvError(std::size_t line, const std::string& what)
        : Error("loan csv line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace admit
