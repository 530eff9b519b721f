#include "courier/errors.hpp"

namespace courier {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_dataset: return "MalformedDataset";
    case ErrorKind::invalid_geometry: return "InvalidGeometry";
    case ErrorKind::orphan_station: return "OrphanStation";
    case ErrorKind::out_of_service_area: return "OutOfServiceArea";
    case ErrorKind::no_such_network: return "NoSuchNetwork";
    case ErrorKind::service_unavailable: return "ServiceUnavailable";
    case ErrorKind::precondition_violation: return "PreconditionViolation";
    case ErrorKind::invalid_order: return "InvalidOrder";
    case ErrorKind::no_feasible_alternative: return "NoFeasibleAlternative";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::config_error: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace courier
