#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lhott {

enum class ErrorKind {
  NotAGroup,
  NotAnAction,
  InvalidGroupoid,
  InvalidFunctor,
  InvalidNaturalIso,
  UnknownObject,
  CodomainMismatch,
  BaseMismatch,
  InvalidSystem,
  InvalidMap,
  Composability,
  NotAnEquivalence,
  InternalAxiomFailure,
  IncoherentSquare,
  Mismatch,
  InterfaceMismatch,
  NonInvertibleNorm,
  InvalidTwist,
  TwistedClassUnsupported,
  CarrierMismatch,
  ShapeMismatch,
  SizeLimit,
  BadCharacterData,
  ParseError,
  NameError,
  TypeError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::NotAnAction: return "NotAnAction";
    case ErrorKind::InvalidGroupoid: return "InvalidGroupoid";
    case ErrorKind::InvalidFunctor: return "InvalidFunctor";
    case ErrorKind::InvalidNaturalIso: return "InvalidNaturalIso";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::CodomainMismatch: return "CodomainMismatch";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::InvalidSystem: return "InvalidSystem";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::Composability: return "Composability";
    case ErrorKind::NotAnEquivalence: return "NotAnEquivalence";
    case ErrorKind::InternalAxiomFailure: return "InternalAxiomFailure";
    case ErrorKind::IncoherentSquare: return "IncoherentSquare";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorKind::NonInvertibleNorm: return "NonInvertibleNorm";
    case ErrorKind::InvalidTwist: return "InvalidTwist";
    case ErrorKind::TwistedClassUnsupported: return "TwistedClassUnsupported";
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::BadCharacterData: return "BadCharacterData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NameError: return "NameError";
    case ErrorKind::TypeError: return "TypeError";
  }
  return "Unknown";
}

/// All engine failures surface as this exception; `kind()` is the stable
/// classifier, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace lhott
