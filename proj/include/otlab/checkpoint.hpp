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

#ifndef OTLAB_CHECKPOINT_HPP
#define OTLAB_CHECKPOINT_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>

namespace otlab {

// Self-describing binary container: magic, format version, config hash,
// iteration counter, then named float64 arrays (little-endian).
struct Checkpoint {
  std::uint32_t version = 1;
  std::uint64_t config_hash = 0;
  std::int64_t iteration = 0;
  std::map<std::string, Eigen::VectorXd> arrays;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

}  // namespace otlab

#endif  // OTLAB_CHECKPOINT_HPP
