#pragma once

#include <stdexcept>
#include <string>

namespace pco {

enum class ErrorKind {
  EvaluationSingularity,
  InvalidParameter,
  InfiniteVoltage,
  EndpointSingularity,
  InternalConsistency,
  InvalidPrf,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A response function (or expression) produced a non-finite value.
class EvaluationSingularity : public Error {
 public:
  EvaluationSingularity(double phi, double eps, std::string where);

  double phi() const noexcept { return phi_; }
  double eps() const noexcept { return eps_; }
  const std::string& where() const noexcept { return where_; }

 private:
  double phi_;
  double eps_;
  std::string where_;
};

}  // namespace pco
