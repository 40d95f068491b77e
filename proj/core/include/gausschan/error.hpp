#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gausschan {

enum class ErrorKind {
  Structural,          // dimension mismatch, wrong symmetry class, non-finite entries
  NotPSD,
  NotSymplectic,
  NotOrthogonal,
  BlockStructureViolated,
  NotContraction,
  NotSymplecticSet,
  InvalidTemperature,
  InvalidChannel,
  ExtensionFailed,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Structural: return "Structural";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotSymplectic: return "NotSymplectic";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::BlockStructureViolated: return "BlockStructureViolated";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NotSymplecticSet: return "NotSymplecticSet";
    case ErrorKind::InvalidTemperature: return "InvalidTemperature";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::ExtensionFailed: return "ExtensionFailed";
  }
  return "Unknown";
}

}  // namespace gausschan
