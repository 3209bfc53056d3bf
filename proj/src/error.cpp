#include "bmb/error.hpp"

namespace bmb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::EmptyQuery: return "EmptyQuery";
    case ErrorKind::QueryIsEverything: return "QueryIsEverything";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::InvalidDegreesOfFreedom: return "InvalidDegreesOfFreedom";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EmptyInterval: return "EmptyInterval";
    case ErrorKind::ConstantVariable: return "ConstantVariable";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::LagTooLarge: return "LagTooLarge";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::SamplerFailure: return "SamplerFailure";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace bmb
