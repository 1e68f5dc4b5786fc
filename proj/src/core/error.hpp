#pragma once

#include <stdexcept>
#include <string>

namespace smoothrl {

// Mirrors srl_status in the public C header.
enum class ErrorCode {
  kInvalidArgument = 1,
  kConfig = 2,
  kNumerical = 3,
  kDomain = 4,
  kIo = 5,
  kBudgetExhausted = 6,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorCode::kInvalidArgument, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::kConfig, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorCode::kNumerical, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::kDomain, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::kIo, w) {}
};

}  // namespace smoothrl
