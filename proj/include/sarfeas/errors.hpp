#pragma once

#include <stdexcept>
#include <string>

namespace sarfeas {

/// Configuration or schema violation (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical/geometric domain violation (CLI exit code 3).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative numerical method failed to converge (CLI exit code 4).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sarfeas
