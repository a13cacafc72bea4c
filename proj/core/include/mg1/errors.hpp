// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mg1 {

enum class ErrorKind {
  DimensionMismatch,
  NegativeProbability,
  BadDiagonal,
  PositiveRowSum,
  SingularGenerator,
  RejectionBudgetExceeded,
  Unstable,
  NoConvergence,
  TailTooHeavy,
  DegenerateFeature,
  DatasetMismatch,
  PercentileBeyondTruncation,
  NonPositiveSample,
  InvalidArgument,
  ParseError,
  IoError,
};

/// Stable category name, printed by the CLI as the first token of an error line.
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mg1
