#pragma once

#include <stdexcept>
#include <string>

namespace logjet {

// Mismatched orders / dimensions between operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation left its mathematical domain (division by a jet with vanishing
// constant term, inverting a non-regular reparametrization, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A point fell outside the requested coordinate chart.
struct ChartError : DomainError {
    using DomainError::DomainError;
};

// Invalid configuration (bad schedule, bad structure description, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numeric truncation/precision budget exceeded.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace logjet
