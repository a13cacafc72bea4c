// SPDX-License-Identifier: Apache-2.0
#include "mg1/errors.hpp"

namespace mg1 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeProbability: return "NegativeProbability";
    case ErrorKind::BadDiagonal: return "BadDiagonal";
    case ErrorKind::PositiveRowSum: return "PositiveRowSum";
    case ErrorKind::SingularGenerator: return "SingularGenerator";
    case ErrorKind::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TailTooHeavy: return "TailTooHeavy";
    case ErrorKind::DegenerateFeature: return "DegenerateFeature";
    case ErrorKind::DatasetMismatch: return "DatasetMismatch";
    case ErrorKind::PercentileBeyondTruncation: return "PercentileBeyondTruncation";
    case ErrorKind::NonPositiveSample: return "NonPositiveSample";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mg1
