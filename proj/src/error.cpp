#include "selfnorm/error.hpp"

namespace selfnorm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownDistribution: return "UnknownDistribution";
    case ErrorKind::DomainDiverges: return "DomainDiverges";
    case ErrorKind::DomainUnsupported: return "DomainUnsupported";
    case ErrorKind::MomentUndefined: return "MomentUndefined";
    case ErrorKind::SamplerUnavailable: return "SamplerUnavailable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool Error::is_domain_error() const noexcept {
  switch (kind_) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularHessian:
      return false;
    default:
      return true;
  }
}

}  // namespace selfnorm
