#pragma once

#include <stdexcept>
#include <string>

namespace flatblock {

enum class ErrorCode {
  DivisionByZero,
  FieldMismatch,
  ParseError,
  NonParallelGluing,
  NonConvexFace,
  Disconnected,
  BadGluing,
  UnknownBuiltin,
  BadParams,
  NotTransitive,
  DisconnectedCover,
  NonPositiveDeterminant,
  FieldInsufficient,
  BadPolygon,
  ZeroDirection,
  SectorRequired,
  BudgetTooLargeGuard,
  NoSingularities,
  ContainsEndpoint,
  NoCoverData,
  DegenerateRank,
  NotApplicable,
  PreconditionFailed,
  IOError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flatblock
