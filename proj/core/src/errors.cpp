#include "concmeas/errors.hpp"

namespace concmeas {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotRegularlyVarying: return "not-regularly-varying";
    case ErrorKind::BelowWellRange: return "below-well-range";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::AsymptoticRegime: return "asymptotic-regime";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::MassDeficit: return "mass-deficit";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace concmeas
