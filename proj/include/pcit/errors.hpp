#pragma once

#include <stdexcept>
#include <string>

namespace pcit {

/// Input data is statistically unusable (e.g. a constant response or a
/// residual vector with zero sum of squares).
struct degenerate_data_error : std::runtime_error {
    explicit degenerate_data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed (e.g. a Cholesky factorization that does not
/// succeed even after jitter).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed external input (CSV cell that does not parse, missing column).
/// Rows are 1-based counting the header line.
struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, std::size_t row, std::string column)
        : std::runtime_error(msg), row(row), column(std::move(column)) {}
    std::size_t row;
    std::string column;
};

}  // namespace pcit
