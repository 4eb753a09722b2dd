// Copyright 2026 The Fairpoison Authors
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

#ifndef FAIRPOISON_STATUS_MACROS_H_
#define FAIRPOISON_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define FP_STATUS_CONCAT_INNER_(x, y) x##y
#define FP_STATUS_CONCAT_(x, y) FP_STATUS_CONCAT_INNER_(x, y)

// Evaluates `expr` (an absl::Status) and returns it from the enclosing
// function when it is not OK.
#define FP_RETURN_IF_ERROR(expr)                  \
  do {                                            \
    ::absl::Status fp_status_ = (expr);           \
    if (!fp_status_.ok()) return fp_status_;      \
  } while (false)

// Binds the value of an absl::StatusOr<T> expression to `lhs`, or returns the
// error status from the enclosing function.
#define FP_ASSIGN_OR_RETURN(lhs, rexpr) \
  FP_ASSIGN_OR_RETURN_IMPL_(FP_STATUS_CONCAT_(fp_statusor_, __LINE__), lhs, rexpr)

#define FP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                              \
  if (!statusor.ok()) return std::move(statusor).status(); \
  lhs = std::move(statusor).value()

#endif  // FAIRPOISON_STATUS_MACROS_H_
