#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace airan {

/// Error categories raised by the library. Each value maps 1:1 onto a
/// C API status code, so keep the order stable.
enum class Errc {
  // simcore
  PastDue,
  NoRoute,
  // datacollect
  SyntaxError,
  TypeError,
  UnknownField,
  MissingAttribute,
  BudgetInvalid,
  UnreachableDestination,
  SourceUnavailable,
  // modelmgmt
  DuplicateVersion,
  InvalidTransition,
  NotActive,
  ContextMissing,
  EmptyValidationSet,
  // collabai
  EmptyRound,
  LengthMismatch,
  RoundMismatch,
  NoParticipants,
  // energy
  DimensionMismatch,
  SeriesLengthMismatch,
  InsufficientHistory,
  // rca
  OutOfDomain,
  MissingDomain,
  DegenerateDataset,
  SchemaMismatch,
  // assurance
  UnknownApp,
  // scenario / io
  ParseError,
  ValidationError,
  Io,
  Internal,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace airan
