#pragma once

#include <stdexcept>
#include <string>

namespace lowzero {

// Bad argument values (out-of-range parameters, unsupported support radius).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Two computations that must agree did not; always an implementation bug.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Numerical routine failed to reach its accuracy target.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration or memory cap exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed command line or config file.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace lowzero
