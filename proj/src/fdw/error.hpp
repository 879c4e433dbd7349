#pragma once

#include <stdexcept>
#include <string>

namespace fdw {

enum class ErrorCode {
  domain,
  index,
  solver,
  convergence,
  io,
  config,
};

// Base class for every exception raised by the library. The code survives the
// trip through the C API as an integer status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& what) : Error(ErrorCode::index, what) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& what) : Error(ErrorCode::solver, what) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& what) : Error(ErrorCode::convergence, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

#define FDW_REQUIRE(cond, ErrType, msg) \
  do {                                  \
    if (!(cond)) throw ErrType(msg);    \
  } while (false)

}  // namespace fdw
