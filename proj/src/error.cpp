#include "airan/error.hpp"

namespace airan {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::PastDue: return "PastDue";
    case Errc::NoRoute: return "NoRoute";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::TypeError: return "TypeError";
    case Errc::UnknownField: return "UnknownField";
    case Errc::MissingAttribute: return "MissingAttribute";
    case Errc::BudgetInvalid: return "BudgetInvalid";
    case Errc::UnreachableDestination: return "UnreachableDestination";
    case Errc::SourceUnavailable: return "SourceUnavailable";
    case Errc::DuplicateVersion: return "DuplicateVersion";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::NotActive: return "NotActive";
    case Errc::ContextMissing: return "ContextMissing";
    case Errc::EmptyValidationSet: return "EmptyValidationSet";
    case Errc::EmptyRound: return "EmptyRound";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::RoundMismatch: return "RoundMismatch";
    case Errc::NoParticipants: return "NoParticipants";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SeriesLengthMismatch: return "SeriesLengthMismatch";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::MissingDomain: return "MissingDomain";
    case Errc::DegenerateDataset: return "DegenerateDataset";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::UnknownApp: return "UnknownApp";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Io: return "Io";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace airan
