#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrec {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructed object would violate a structural invariant
/// (empty video row, dangling content index, NaN score, ...).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// A dataset file could not be parsed. Carries the 1-based line number
/// and the offending field when known.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ", field '" + field +
                "': " + reason),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// v_s^2 + a_c^2 == 0 for some present observation: the likelihood is
/// unbounded there and no update rule applies.
class DegenerateVariance : public Error {
public:
    using Error::Error;
};

/// A subject with present scores has zero score variance, so the
/// z-score transform is undefined for it.
class ZeroVariance : public Error {
public:
    ZeroVariance(std::size_t subject, const std::string& name)
        : Error("subject " + name + " has zero score variance; z-scoring undefined"),
          subject_(subject) {}

    std::size_t subject() const noexcept { return subject_; }

private:
    std::size_t subject_;
};

/// Dropping the rejected subjects would leave some video with no scores.
class EmptyAfterRejection : public Error {
public:
    using Error::Error;
};

/// Repeated subsampling attempts failed to keep every row and column covered.
class CoverageUnattainable : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qrec
