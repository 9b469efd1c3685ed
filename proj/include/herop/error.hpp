#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace herop {

enum class ErrorKind {
  Dimension,
  NonFinite,
  InvalidArgument,
  SingularBasis,
  IllConditionedDecomposition,
  InputNotAmIsometry,
  PreconditionFailed,
  NotTwoIsometric,
  StructureViolation,
  NotA2Isometric,
  ANotPositive,
  GenerationFailed,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind discriminates the failure.
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
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::IllConditionedDecomposition: return "IllConditionedDecomposition";
    case ErrorKind::InputNotAmIsometry: return "InputNotAmIsometry";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotTwoIsometric: return "NotTwoIsometric";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::NotA2Isometric: return "NotA2Isometric";
    case ErrorKind::ANotPositive: return "ANotPositive";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace herop
