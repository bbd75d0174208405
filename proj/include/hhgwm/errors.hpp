#pragma once

#include <stdexcept>
#include <string>

namespace hhgwm {

/// Base of every error thrown by the library. `kind()` is the
/// machine-readable class echoed by the CLI on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

/// Evaluation too close to a pole of a ratio-type quantity.
class PoleProximity : public Error {
 public:
  explicit PoleProximity(const std::string& what) : Error("PoleProximity", what) {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what) : Error("NonConvergence", what) {}
};

class NoClassicalReturn : public Error {
 public:
  explicit NoClassicalReturn(const std::string& what) : Error("NoClassicalReturn", what) {}
};

class GridTooSmall : public Error {
 public:
  explicit GridTooSmall(const std::string& what) : Error("GridTooSmall", what) {}
};

class ZeroIntensity : public Error {
 public:
  explicit ZeroIntensity(const std::string& what) : Error("ZeroIntensity", what) {}
};

class SchemaMismatch : public Error {
 public:
  explicit SchemaMismatch(const std::string& what) : Error("SchemaMismatch", what) {}
};

}  // namespace hhgwm
