// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace life {

// Bad user input: config documents, scenario values, CLI flags.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A shape or precondition violated by a caller.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace life

namespace life {

// A forecast that has no finite value (e.g. TPS of an empty workload).
class ForecastError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace life
