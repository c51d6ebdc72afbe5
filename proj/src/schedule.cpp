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

#include "otlab/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace otlab {

const char* schedule_kind_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::Constant: return "Constant";
    case ScheduleKind::Cosine: return "Cosine";
    case ScheduleKind::Linear: return "Linear";
    case ScheduleKind::Step: return "Step";
  }
  return "?";
}

ScheduleKind schedule_kind_from_name(std::string_view name) {
  if (name == "Constant") return ScheduleKind::Constant;
  if (name == "Cosine") return ScheduleKind::Cosine;
  if (name == "Linear") return ScheduleKind::Linear;
  if (name == "Step") return ScheduleKind::Step;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) +
                              "' (valid: Constant, Cosine, Linear, Step)");
}

void DivergenceSchedule::validate() const {
  std::string errors;
  if (!(alpha_min > 0.0)) errors += " alpha_min must be positive;";
  if (!(alpha_max >= alpha_min)) errors += " alpha_max must be >= alpha_min;";
  if (schedule_end_iter <= 0) errors += " schedule_end_iter must be positive;";
  if (kind == ScheduleKind::Step && step_period <= 0) {
    errors += " step_period must be positive;";
  }
  if (!errors.empty()) {
    throw std::invalid_argument("invalid DivergenceSchedule:" + errors);
  }
}

namespace {
// Exact at both endpoints, monotone for w in [0,1].
double lerp_alpha(double lo, double hi, double w) {
  return lo * (1.0 - w) + hi * w;
}
}  // namespace

double schedule_alpha(const DivergenceSchedule& s, std::int64_t iter) {
  switch (s.kind) {
    case ScheduleKind::Constant:
      return s.alpha_min;
    case ScheduleKind::Linear: {
      const double t =
          std::min(static_cast<double>(iter) / s.schedule_end_iter, 1.0);
      return lerp_alpha(s.alpha_min, s.alpha_max, t);
    }
    case ScheduleKind::Cosine: {
      // Half-cosine ramp: the usual cosine anneal flipped to increase.
      const double t =
          std::min(static_cast<double>(iter) / s.schedule_end_iter, 1.0);
      return lerp_alpha(s.alpha_min, s.alpha_max,
                        0.5 * (1.0 - std::cos(M_PI * t)));
    }
    case ScheduleKind::Step: {
      const auto doublings = iter / s.step_period;
      // Guard the shift; beyond ~60 doublings the cap applies anyway.
      if (doublings >= 63) return s.alpha_max;
      const double v = s.alpha_min * static_cast<double>(1ll << doublings);
      return std::min(v, s.alpha_max);
    }
  }
  return s.alpha_min;
}

}  // namespace otlab
