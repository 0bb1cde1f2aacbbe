#pragma once

#include <stdexcept>
#include <string>

namespace spbw {

enum class Err {
  MalformedPreset,
  NonIrreducibleModulus,
  CardinalityOverCap,
  MixedRings,
  SymbolicRingUnsupported,
  SymbolicNeedsSampledMode,
  NotAHomomorphism,
  NotADerivation,
  GeneratorImageMissing,
  NotAnIdeal,
  NonTerminatingRewrite,
  MixedExtensions,
  HypothesisNotCertified,
  HypothesisFailedRingSide,
  OracleBudgetExceeded,
  EnumerationOverCap,
  EmptyTarget,
  PreconditionNilpotent,
  DescentStuck,
  LawViolation,
  NotNI,
  SyntaxError,
  UnresolvedName,
  DuplicateDeclaration,
  RelationNotLowerTriangular,
  IoError,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err kind, std::string msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace spbw
