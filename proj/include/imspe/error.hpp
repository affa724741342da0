//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace imspe {

enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidHyperparameter,
  kOutOfDomain,
  kSingularDesign,
  kOracleDivergence,
  kNoConvergence,
};

class Error: public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) { }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Raised when the correlation matrix of a design is not numerically positive
// definite (coincident or near-coincident points).
class SingularDesignError: public Error {
public:
  SingularDesignError(const std::string &what, double rcond)
      : Error(ErrorCode::kSingularDesign, what), rcond_(rcond) { }

  // Reciprocal condition estimate of the correlation matrix (L1 norm).
  double rcond() const noexcept { return rcond_; }

private:
  double rcond_;
};

}  // namespace imspe
