// Copyright 2026 The cvqubit Authors
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

#include "cvqubit/errors.hpp"

namespace cvq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNumericalDegeneracy: return "numerical-degeneracy";
    case ErrorKind::kAboveThreshold: return "above-threshold";
    case ErrorKind::kDegenerateMode: return "degenerate-mode";
    case ErrorKind::kNotGenericForm: return "not-in-generic-form";
    case ErrorKind::kVacuumTrigger: return "vacuum-trigger";
    case ErrorKind::kNoClick: return "no-click";
    case ErrorKind::kUndefinedRatio: return "undefined-ratio";
    case ErrorKind::kInconsistentState: return "inconsistent-state";
    case ErrorKind::kInvalidState: return "invalid-state";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace cvq
