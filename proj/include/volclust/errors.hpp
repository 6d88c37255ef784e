#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volclust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row. `line()` is 1-based and counts the header.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DuplicateDateError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Parameters produce a nonpositive conditional variance or violate a family constraint.
class InfeasibleParameters : public DomainError {
public:
    using DomainError::DomainError;
};

/// Parameter sits on the boundary of its feasible region and has no unconstrained image.
class BoundaryError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class DataQualityError : public Error {
public:
    using Error::Error;
};

/// Zero-width histogram range or constant series.
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace volclust
