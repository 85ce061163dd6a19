// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace divclust {

// Exit codes reported by the CLI. Errors not listed here exit with 1.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  parse = 2,
  infeasible = 3,
  cap = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(ExitCode::parse, "parse error: " + what) {}
};

// A structurally invalid instance file; `field` names the offending entry.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : Error(ExitCode::parse, "schema error in '" + field + "': " + what),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Violation of a metric axiom, with the witnessing points.
class MetricViolation : public Error {
 public:
  MetricViolation(const std::string& what, int u, int v, int w = -1)
      : Error(ExitCode::parse, "metric violation: " + what),
        u_(u), v_(v), w_(w) {}
  int u() const { return u_; }
  int v() const { return v_; }
  int w() const { return w_; }

 private:
  int u_, v_, w_;
};

class BadParameter : public Error {
 public:
  explicit BadParameter(const std::string& what)
      : Error(ExitCode::parse, "bad parameter: " + what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ExitCode::infeasible, "infeasible: " + what) {}
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what)
      : Error(ExitCode::cap, "enumeration cap exceeded: " + what) {}
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what)
      : Error(ExitCode::failure, "index out of range: " + what) {}
};

class EmptySolution : public Error {
 public:
  EmptySolution() : Error(ExitCode::failure, "empty solution set") {}
};

class EmptyCandidate : public Error {
 public:
  explicit EmptyCandidate(int block)
      : Error(ExitCode::failure,
              "empty candidate set for block " + std::to_string(block)) {}
};

class EmptyBlock : public Error {
 public:
  explicit EmptyBlock(int block)
      : Error(ExitCode::failure,
              "empty block " + std::to_string(block)) {}
};

class EmptyPart : public Error {
 public:
  explicit EmptyPart(const std::string& what)
      : Error(ExitCode::failure, "empty part: " + what) {}
};

class DegenerateMetric : public Error {
 public:
  DegenerateMetric()
      : Error(ExitCode::failure, "all pairwise distances are zero") {}
};

class NotDisjoint : public Error {
 public:
  NotDisjoint(int facility, int group_a, int group_b)
      : Error(ExitCode::failure,
              "facility " + std::to_string(facility) + " belongs to groups " +
                  std::to_string(group_a) + " and " + std::to_string(group_b)) {
  }
};

class RequirementSumMismatch : public Error {
 public:
  RequirementSumMismatch(int sum, int k)
      : Error(ExitCode::failure,
              "requirements sum to " + std::to_string(sum) +
                  " but k = " + std::to_string(k)) {}
};

}  // namespace divclust
