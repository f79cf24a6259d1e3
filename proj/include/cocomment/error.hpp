#pragma once

#include <stdexcept>
#include <string>

namespace cocomment {

// Exit codes used by the command-line front end.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 2,
  kInput = 3,
  kResource = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Invalid parameters (alpha outside (0,1), unknown option values, ...).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

// Unreadable, missing or malformed input data.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::kInput, what) {}
};

// A configured memory or size budget would be exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ExitCode::kResource, what) {}
};

// A quantity is mathematically undefined for the given input
// (zero total weight, constant column, ...).
class UndefinedError : public Error {
 public:
  explicit UndefinedError(const std::string& what) : Error(ExitCode::kInput, what) {}
};

}  // namespace cocomment
