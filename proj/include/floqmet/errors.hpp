// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace floqmet {

/// Invalid user input: malformed configuration, bad key, or call arguments
/// that violate a documented precondition.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation (for example a
/// quasienergy inside the reservoir band, or an elliptic modulus >= 1).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed: no convergence, an unstable integration, or
/// an internal consistency check that did not hold.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace floqmet
