#pragma once

#include <stdexcept>
#include <string>

namespace trap_lab {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad scenario, malformed input file, or inconsistent physical configuration.
class config_error : public error {
 public:
  using error::error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
 public:
  using error::error;
};

/// A computation that did not converge or produced a non-finite value.
class numerical_error : public error {
 public:
  using error::error;
};

}  // namespace trap_lab
