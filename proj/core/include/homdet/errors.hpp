#pragma once

#include <stdexcept>
#include <string>

namespace homdet {

/// Malformed or out-of-contract input (bad matrix, wrong dims, invalid config).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Two internally computed routes to the same quantity disagreed beyond
/// tolerance. Indicates a bug, not bad input.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace homdet
