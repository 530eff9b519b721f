#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace courier {

enum class ErrorKind {
  malformed_dataset,
  invalid_geometry,
  orphan_station,
  out_of_service_area,
  no_such_network,
  service_unavailable,
  precondition_violation,
  invalid_order,
  no_feasible_alternative,
  shape_mismatch,
  config_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (notably the CLI) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace courier
