#pragma once

#include <stdexcept>
#include <string>

namespace covkit {

// Bad input data: schema violations, failed preconditions, size guards.
// The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The input was well formed but a numerical procedure could not complete
// (PSD violation beyond tolerance, irrep refinement giving up, ...).
// The CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw ValidationError(msg);
}

[[noreturn]] inline void fail_numerical(const std::string& msg) {
  throw NumericalError(msg);
}

}  // namespace covkit
