#pragma once

#include <stdexcept>
#include <string>

namespace thermoadh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value; `path()` names the offending field
/// (e.g. "regularization.mu").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// A Newton sub-solve of the time step did not reach its tolerance.
class NewtonDivergence : public Error {
 public:
  NewtonDivergence(std::string subsolve, const std::string& what)
      : Error("newton divergence in " + subsolve + ": " + what),
        subsolve_(std::move(subsolve)) {}
  const std::string& subsolve() const noexcept { return subsolve_; }

 private:
  std::string subsolve_;
};

class StepTooSmall : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoadh
