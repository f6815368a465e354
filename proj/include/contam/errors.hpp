#pragma once

#include <stdexcept>
#include <string>

namespace contam {

// Invalid experiment or scheme configuration (bad dimensions, rows off the simplex).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A learner broke the recursive-learning protocol.
struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace contam
