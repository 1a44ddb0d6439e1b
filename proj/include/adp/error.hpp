#pragma once

#include <stdexcept>
#include <string>

namespace adp {

/// Base of every error raised by the library. Each subclass names the
/// failing stage so the CLI can report it without a stack trace.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntactically malformed input (bad JSON, bad number, bad timestamp).
class ParseError : public Error {
public:
    ParseError(const std::string& field, const std::string& what)
        : Error("parse error in field '" + field + "': " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Well-formed input that violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Trainer preconditions (e.g. single-class data).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// A split or fold could not preserve both classes.
class StratificationError : public Error {
public:
    using Error::Error;
};

/// Corrupted, truncated, or unsupported model files.
class ModelFormatError : public Error {
public:
    using Error::Error;
};

class ModelVersionError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};

/// Caller broke a function contract (wrong arity, mismatched lengths).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace adp
