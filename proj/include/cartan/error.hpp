#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cartan {

enum class ErrorKind {
  NotHermitian,
  NotAntisymmetric,
  NotCommuting,
  NotNormal,
  NotContraction,
  NotInvariant,
  NotIntertwiner,
  NotOnShilov,
  NotMatrixShaped,
  NoConvergence,
  NoLiftExists,
  WrongLength,
  SizeMismatch,
  ArityMismatch,
  CapExceeded,
  EmptyMeasure,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotIntertwiner: return "NotIntertwiner";
    case ErrorKind::NotOnShilov: return "NotOnShilov";
    case ErrorKind::NotMatrixShaped: return "NotMatrixShaped";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoLiftExists: return "NoLiftExists";
    case ErrorKind::WrongLength: return "WrongLength";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::EmptyMeasure: return "EmptyMeasure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cartan
