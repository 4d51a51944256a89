#pragma once

#include <stdexcept>
#include <string>

namespace fsd {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong vector/matrix lengths or bit counts.
class InputShapeError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient channel seen during orthogonalization.
class SingularChannelError : public Error {
 public:
  using Error::Error;
};

// Numeric parameter outside its domain (noise variance, N_c, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Unsupported combination of settings (distribution, parallelism, detector).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsd
