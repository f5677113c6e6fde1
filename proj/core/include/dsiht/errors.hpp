#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dsiht {

using Index = Eigen::Index;

// Invalid arguments are reported with std::invalid_argument throughout.

/// A design column with zero Euclidean norm; it cannot be rescaled.
class DegenerateColumnError : public std::runtime_error
{
public:
    explicit DegenerateColumnError(Index column)
        : std::runtime_error("column " + std::to_string(column) + " is identically zero"),
          column_(column)
    {}

    Index column() const noexcept { return column_; }

private:
    Index column_;
};

/// Raised by the exhaustive enumerators when the number of supports exceeds the guard.
class EnumerationTooLarge : public std::length_error
{
public:
    EnumerationTooLarge(double count, double limit)
        : std::length_error("support enumeration would visit " + std::to_string(count)
                            + " sets (limit " + std::to_string(limit) + ")"),
          count_(count), limit_(limit)
    {}

    double count() const noexcept { return count_; }
    double limit() const noexcept { return limit_; }

private:
    double count_;
    double limit_;
};

/// An internal state that a well-formed input cannot produce.
class InvalidStateError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Malformed input file; carries the file name and 1-based line (0 if not line-oriented).
class ParseError : public std::runtime_error
{
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          file_(std::move(file)), line_(line)
    {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

} // namespace dsiht
