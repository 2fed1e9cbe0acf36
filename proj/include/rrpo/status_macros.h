// Copyright 2026 The rrpo Authors
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

#ifndef RRPO_STATUS_MACROS_H_
#define RRPO_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define RRPO_CONCAT_INNER_(a, b) a##b
#define RRPO_CONCAT_(a, b) RRPO_CONCAT_INNER_(a, b)

#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    const absl::Status rrpo_status_ = (expr);  \
    if (!rrpo_status_.ok()) return rrpo_status_; \
  } while (0)

#define RRPO_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(tmp).value()

// Evaluates a StatusOr expression, returning its status on error and
// otherwise assigning the value to `lhs`.
#define ASSIGN_OR_RETURN(lhs, rexpr) \
  RRPO_ASSIGN_OR_RETURN_IMPL_(RRPO_CONCAT_(rrpo_statusor_, __LINE__), lhs, rexpr)

#endif  // RRPO_STATUS_MACROS_H_
