#pragma once

#include <stdexcept>
#include <string>

namespace swarmselect {

/// Input data violates a documented precondition (bad file, degenerate dataset,
/// single-class labels, ...). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an out-of-range argument or an invalid configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace swarmselect
