#pragma once

#include <stdexcept>

namespace ihtc {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-supplied parameters violate a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// The configuration is valid but cannot be run on this data, e.g. too few
// prototypes remain for the requested number of clusters.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace ihtc
