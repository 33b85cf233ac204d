#pragma once

#include <stdexcept>
#include <string>

namespace lingua {

/// Runtime failure inside the pipeline (I/O, numerical trouble).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, unknown labels, missing annotation layers,
/// invalid configuration. The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace lingua
