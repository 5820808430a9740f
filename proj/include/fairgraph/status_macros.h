// Copyright 2026 The fairgraph Authors.
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

#ifndef FAIRGRAPH_STATUS_MACROS_H_
#define FAIRGRAPH_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define FG_STATUS_CONCAT_INNER_(x, y) x##y
#define FG_STATUS_CONCAT_(x, y) FG_STATUS_CONCAT_INNER_(x, y)

// Returns early from the enclosing function if `expr` is not OK.
#define FG_RETURN_IF_ERROR(expr)                    \
  do {                                              \
    const absl::Status fg_status_ = (expr);         \
    if (!fg_status_.ok()) return fg_status_;        \
  } while (0)

// Evaluates a StatusOr expression, assigning the value to `lhs` on success
// and returning the status from the enclosing function otherwise.
#define FG_ASSIGN_OR_RETURN(lhs, rexpr) \
  FG_ASSIGN_OR_RETURN_IMPL_(FG_STATUS_CONCAT_(fg_statusor_, __LINE__), lhs, rexpr)

#define FG_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                              \
  if (!statusor.ok()) return std::move(statusor).status(); \
  lhs = std::move(statusor).value()

#endif  // FAIRGRAPH_STATUS_MACROS_H_
