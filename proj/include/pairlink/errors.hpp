#pragma once

#include <stdexcept>
#include <string>

namespace pairlink {

// Invalid parameters, malformed config files, out-of-domain arguments.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical validity guard refused to proceed (aliased grid, dark-count
// approximation out of range, inconsistent probabilities).
class numeric_guard_error : public std::runtime_error {
public:
    explicit numeric_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pairlink
