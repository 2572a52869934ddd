// Copyright 2026 The VQA Robustness Harness Authors.
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

#ifndef VQAEVAL_SPLIT_BUILTIN_SHIFTS_H_
#define VQAEVAL_SPLIT_BUILTIN_SHIFTS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "vqaeval/split/shift_spec.h"

namespace vqaeval::split {

// The seven main shifts, the two swapped SLAKE shifts and the OVQA
// body-part x question-type shift.
const std::vector<ShiftSpec>& BuiltinShifts();
std::optional<ShiftSpec> FindBuiltinShift(std::string_view name);

}  // namespace vqaeval::split

#endif  // VQAEVAL_SPLIT_BUILTIN_SHIFTS_H_
