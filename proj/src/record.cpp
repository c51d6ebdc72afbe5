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

#include "otlab/record.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace otlab {

namespace {
// %.17g round-trips doubles and keeps the stream byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string metrics_json_line(const MetricsRecord& rec) {
  std::string line = "{\"iter\":" + std::to_string(rec.iter);
  line += ",\"loss_v\":" + fmt(rec.loss_v);
  line += ",\"loss_T\":" + fmt(rec.loss_T);
  line += ",\"alpha\":" + fmt(rec.alpha);
  line += ",\"reg_value\":" + fmt(rec.reg_value);
  line += ",\"wallclock\":" + fmt(rec.wallclock);
  line += ",\"w_hat_mean\":" + fmt(rec.w_hat_mean);
  line += ",\"w_hat_min\":" + fmt(rec.w_hat_min);
  line += ",\"w_hat_max\":" + fmt(rec.w_hat_max);
  line += ",\"w_mean\":" + fmt(rec.w_mean);
  line += ",\"w_min\":" + fmt(rec.w_min);
  line += ",\"w_max\":" + fmt(rec.w_max);
  line += "}";
  return line;
}

void write_metrics_line(std::ostream& out, const MetricsRecord& rec) {
  out << metrics_json_line(rec) << "\n";
}

std::vector<MetricsRecord> read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file: " + path);
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    MetricsRecord rec;
    rec.iter = j.at("iter").get<std::int64_t>();
    rec.loss_v = j.at("loss_v").get<double>();
    rec.loss_T = j.at("loss_T").get<double>();
    rec.alpha = j.at("alpha").get<double>();
    rec.reg_value = j.at("reg_value").get<double>();
    rec.wallclock = j.at("wallclock").get<double>();
    rec.w_hat_mean = j.value("w_hat_mean", 1.0);
    rec.w_hat_min = j.value("w_hat_min", 1.0);
    rec.w_hat_max = j.value("w_hat_max", 1.0);
    rec.w_mean = j.value("w_mean", 1.0);
    rec.w_min = j.value("w_min", 1.0);
    rec.w_max = j.value("w_max", 1.0);
    out.push_back(rec);
  }
  return out;
}

std::string metrics_canonical_bytes(
    const std::vector<MetricsRecord>& metrics) {
  std::string bytes;
  for (const MetricsRecord& rec : metrics) {
    MetricsRecord canon = rec;
    canon.wallclock = 0.0;
    bytes += metrics_json_line(canon);
    bytes += "\n";
  }
  return bytes;
}

std::vector<WeightStatsPoint> weight_statistics(const RunRecord& record) {
  std::vector<WeightStatsPoint> series;
  series.reserve(record.metrics.size());
  for (const MetricsRecord& rec : record.metrics) {
    WeightStatsPoint pt;
    pt.iter = rec.iter;
    pt.w_hat_mean = rec.w_hat_mean;
    pt.w_mean = rec.w_mean;
    pt.w_hat_ratio = rec.w_hat_min > 0.0 ? rec.w_hat_max / rec.w_hat_min : 0.0;
    pt.w_ratio = rec.w_min > 0.0 ? rec.w_max / rec.w_min : 0.0;
    series.push_back(pt);
  }
  return series;
}

}  // namespace otlab
