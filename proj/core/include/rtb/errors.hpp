#pragma once

#include <stdexcept>
#include <string>

namespace rtb {

// Argument outside its mathematical domain (negative price, r outside [0,1], ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Missing or inconsistent arguments (e.g. net-profit utility evaluated without z).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Model fitting failed (empty sample set, degenerate data).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid campaign / strategy configuration (cross-field rules).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (non-finite intermediate, root finder did not converge).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data; carries the 1-based line number of the offending record.
struct DataError : std::runtime_error {
    DataError(const std::string& msg, long line_number)
        : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    long line;
};

// The budget constraint cannot be met as an equality; carries the maximum
// attainable expected spend rate (all bids at the cap).
struct InfeasibleBudgetError : std::runtime_error {
    InfeasibleBudgetError(const std::string& msg, double max_rate)
        : std::runtime_error(msg), max_spend_rate(max_rate) {}
    double max_spend_rate;
};

}  // namespace rtb
