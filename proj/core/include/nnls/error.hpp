#pragma once

#include <stdexcept>
#include <string>

namespace nnls {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: grids, wells, parameters, config files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure did not reach its goal.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A pair could not be placed on the generalized Nehari manifold.
class ManifoldError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace nnls
