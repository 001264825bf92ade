#ifndef PERSUASION_COMMON_ERRORS_H_
#define PERSUASION_COMMON_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace persuasion {

// Base class for every error the toolkit raises. `kind()` is a stable,
// machine-readable tag used in CLI error JSON and service responses.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// A caller violated an operation contract (dimension mismatch, wrong
// provider role, unequal lengths).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& message)
      : Error("contract", message) {}
};

// An operation precondition does not hold for the given data.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error("precondition", message) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& message) : Error("range", message) {}
};

// Similarity or correlation is mathematically undefined for the input.
class UndefinedError : public Error {
 public:
  explicit UndefinedError(const std::string& message)
      : Error("undefined", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error("config", message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::int64_t line)
      : Error("parse", message), line_(line) {}

  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

// The remote side did not answer after all retries.
class TransportError : public Error {
 public:
  TransportError(const std::string& message, int attempts)
      : Error("transport", message), attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

// A provider does not support the requested feature (e.g. log-probs).
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& message)
      : Error("capability", message) {}
};

// Persisted state does not match what replaying it produces.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& message, std::int64_t match_id)
      : Error("integrity", message), match_id_(match_id) {}

  std::int64_t match_id() const noexcept { return match_id_; }

 private:
  std::int64_t match_id_;
};

class LeakageError : public Error {
 public:
  explicit LeakageError(const std::string& message)
      : Error("leakage", message) {}
};

class RegistryError : public Error {
 public:
  explicit RegistryError(const std::string& message)
      : Error("registry", message) {}
};

}  // namespace persuasion

#endif  // PERSUASION_COMMON_ERRORS_H_
