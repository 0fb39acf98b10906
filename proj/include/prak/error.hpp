#pragma once

#include <stdexcept>
#include <string>

namespace prak {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration document or CLI usage problem.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace prak
