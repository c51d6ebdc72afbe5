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

#ifndef OTLAB_RECORD_HPP
#define OTLAB_RECORD_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otlab/diagnostics.hpp"

namespace otlab {

// One newline-delimited JSON metrics record. The weight summaries feed the
// adaptive-weight diagnostics.
struct MetricsRecord {
  std::int64_t iter = 0;
  double loss_v = 0.0;
  double loss_T = 0.0;
  double alpha = 1.0;
  double reg_value = 0.0;
  double wallclock = 0.0;
  double w_hat_mean = 1.0, w_hat_min = 1.0, w_hat_max = 1.0;
  double w_mean = 1.0, w_min = 1.0, w_max = 1.0;
};

// Append-only log of one training run.
struct RunRecord {
  std::uint64_t config_hash = 0;
  std::string status = "finished";  // "finished" | "aborted: <reason>"
  std::string output_dir;           // empty for in-memory runs
  std::vector<MetricsRecord> metrics;
  std::vector<std::string> checkpoint_files;
  // Diagnostics series, filled by the experiment layer's snapshot hooks.
  std::vector<ArcDistribution> arc_series;
  std::vector<std::pair<std::int64_t, double>> w2_series;
  std::optional<ModeReport> final_mode_report;
  // Mean exact W2 to the target over five 512-sample draws, final model.
  double final_w2 = std::numeric_limits<double>::quiet_NaN();

  bool finished() const { return status == "finished"; }
};

std::string metrics_json_line(const MetricsRecord& rec);
void write_metrics_line(std::ostream& out, const MetricsRecord& rec);
std::vector<MetricsRecord> read_metrics_file(const std::string& path);

// Canonical byte serialization of the metric stream for determinism checks.
// Every field except wallclock participates; wallclock is the one
// non-deterministic field of a record.
std::string metrics_canonical_bytes(const std::vector<MetricsRecord>& metrics);

struct WeightStatsPoint {
  std::int64_t iter = 0;
  double w_hat_mean = 1.0;
  double w_mean = 1.0;
  double w_hat_ratio = 1.0;  // max/min over the logged batch
  double w_ratio = 1.0;
};

// Time series of the sample-weight summaries logged during training.
std::vector<WeightStatsPoint> weight_statistics(const RunRecord& record);

}  // namespace otlab

#endif  // OTLAB_RECORD_HPP
