#pragma once

#include <stdexcept>
#include <string>

namespace tumorsim {

enum class ErrorCode {
  InvalidParameter,
  NonIntegerGrid,
  SingularSystem,
  InvalidInitialData,
  DomainSaturated,
  DegenerateCoefficient,
  MaximumPrincipleViolated,
  CflInfeasible,
  PreconditionViolated,
  InvariantViolated,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C layer can map it onto a status value without string matching.
class SimError : public std::runtime_error {
public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Configuration failures name the offending JSON key path ("model.mu").
class ConfigError : public SimError {
public:
  ConfigError(std::string key_path, const std::string& reason)
      : SimError(ErrorCode::ConfigError,
                 (key_path.empty() ? std::string("config") : key_path) + ": " + reason),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

private:
  std::string key_path_;
};

}  // namespace tumorsim
