// Copyright 2026 The otlab Authors. All Rights Reserved.
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

#ifndef OTLAB_SCHEDULE_HPP
#define OTLAB_SCHEDULE_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace otlab {

enum class ScheduleKind { Constant, Cosine, Linear, Step };

const char* schedule_kind_name(ScheduleKind k);
ScheduleKind schedule_kind_from_name(std::string_view name);

// Monotone non-decreasing divergence-weight schedule from alpha_min to
// alpha_max. Constant schedules stay at alpha_min forever.
struct DivergenceSchedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double alpha_min = 1.0;
  double alpha_max = 1.0;
  std::int64_t schedule_end_iter = 1;  // Cosine/Linear ramp length
  std::int64_t step_period = 1;        // Step only: doubling period

  bool is_constant() const {
    return kind == ScheduleKind::Constant || alpha_min == alpha_max;
  }
  // Throws std::invalid_argument describing every violated field.
  void validate() const;
};

double schedule_alpha(const DivergenceSchedule& s, std::int64_t iter);

}  // namespace otlab

#endif  // OTLAB_SCHEDULE_HPP
