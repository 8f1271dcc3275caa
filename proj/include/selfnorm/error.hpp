#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selfnorm {

enum class ErrorKind {
  InvalidArgument,
  UnknownDistribution,
  DomainDiverges,
  DomainUnsupported,
  MomentUndefined,
  SamplerUnavailable,
  QuadratureFailure,
  NoConvergence,
  SingularHessian,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Domain-class errors (bad inputs for the model) as opposed to numerical failures.
  bool is_domain_error() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace selfnorm
