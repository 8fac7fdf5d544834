// Copyright 2026 The muwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace muwork {

enum class ErrorKind {
  dimension,
  not_completely_positive,
  invalid_mixture,
  precondition,
  structure,
  not_an_algebra,
  domain,
  pole,
  size,
  no_certificate,
  non_convergence,
  stagnation,
  invalid_correlation,
  numerical,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::not_completely_positive: return "not-completely-positive";
    case ErrorKind::invalid_mixture: return "invalid-mixture";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::structure: return "structure";
    case ErrorKind::not_an_algebra: return "not-an-algebra";
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::size: return "size";
    case ErrorKind::no_certificate: return "no-certificate";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::stagnation: return "stagnation";
    case ErrorKind::invalid_correlation: return "invalid-correlation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

/// Base of every exception thrown by the library. The kind drives the CLI
/// exit code, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A decomposition search that ended above its residual target. This is an
/// inconclusive outcome, never a proof that no decomposition exists.
class NoCertificateError : public Error {
 public:
  NoCertificateError(const std::string& what, double best_residual)
      : Error(ErrorKind::no_certificate,
              what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace muwork
