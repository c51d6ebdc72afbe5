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

#include "otlab/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace otlab {

namespace {
constexpr char kMagic[4] = {'O', 'T', 'C', 'K'};

template <class T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return value;
}
}  // namespace

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  out.write(kMagic, 4);
  write_pod(out, version);
  write_pod(out, config_hash);
  write_pod(out, iteration);
  write_pod(out, static_cast<std::uint32_t>(arrays.size()));
  for (const auto& [name, data] : arrays) {
    write_pod(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod(out, static_cast<std::uint64_t>(data.size()));
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  Checkpoint ck;
  ck.version = read_pod<std::uint32_t>(in);
  if (ck.version != 1) {
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(ck.version));
  }
  ck.config_hash = read_pod<std::uint64_t>(in);
  ck.iteration = read_pod<std::int64_t>(in);
  const auto n_arrays = read_pod<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < n_arrays; ++k) {
    const auto name_len = read_pod<std::uint16_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto len = read_pod<std::uint64_t>(in);
    Eigen::VectorXd data(static_cast<Eigen::Index>(len));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(len * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated array " + name);
    ck.arrays.emplace(std::move(name), std::move(data));
  }
  return ck;
}

}  // namespace otlab
