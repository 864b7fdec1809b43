// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbmscope/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rbmscope/errors.hpp"

namespace rbmscope {

namespace {

constexpr char kMagic[8] = {'R', 'B', 'M', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::uint32_t v, std::ofstream& out) {
  std::uint8_t b[4] = {std::uint8_t(v), std::uint8_t(v >> 8), std::uint8_t(v >> 16),
                       std::uint8_t(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::uint64_t v, std::ofstream& out) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = std::uint8_t(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(double v, std::ofstream& out) {
  put_u64(std::bit_cast<std::uint64_t>(v), out);
}

std::uint32_t get_u32(std::ifstream& in) {
  std::uint8_t b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Truncated("checkpoint truncated");
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

std::uint64_t get_u64(std::ifstream& in) {
  std::uint8_t b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw Truncated("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void save_checkpoint(const RbmParams& params, const std::filesystem::path& path,
                     const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_u32(kVersion, out);
  put_u64(static_cast<std::uint64_t>(params.n_visible()), out);
  put_u64(static_cast<std::uint64_t>(params.n_hidden()), out);
  for (Index i = 0; i < params.a.size(); ++i) put_f64(params.a[i], out);
  for (Index j = 0; j < params.b.size(); ++j) put_f64(params.b[j], out);
  for (Index i = 0; i < params.w.rows(); ++i) {
    for (Index j = 0; j < params.w.cols(); ++j) put_f64(params.w(i, j), out);
  }
  out.close();

  nlohmann::ordered_json side;
  side["epoch"] = meta.epoch;
  side["strategy"] = meta.strategy;
  side["seed"] = meta.seed;
  side["n_visible"] = params.n_visible();
  side["n_hidden"] = params.n_hidden();
  std::ofstream js(path.string() + ".json");
  js << side.dump(2) << "\n";
}

RbmParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw BadMagic("not an RBM checkpoint: " + path.string());
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw BadMagic("unsupported checkpoint version");
  const auto n = static_cast<Index>(get_u64(in));
  const auto m = static_cast<Index>(get_u64(in));
  if (n < 1 || m < 1) throw Truncated("checkpoint declares empty layers");
  RbmParams p;
  p.a = Vector(n);
  p.b = Vector(m);
  p.w = Matrix(n, m);
  for (Index i = 0; i < n; ++i) p.a[i] = get_f64(in);
  for (Index j = 0; j < m; ++j) p.b[j] = get_f64(in);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) p.w(i, j) = get_f64(in);
  }
  return p;
}

CheckpointMeta load_checkpoint_meta(const std::filesystem::path& path) {
  std::ifstream js(path.string() + ".json");
  if (!js) return {};
  nlohmann::json side = nlohmann::json::parse(js, nullptr, false);
  if (side.is_discarded()) throw ParseError("malformed checkpoint sidecar");
  CheckpointMeta meta;
  meta.epoch = side.value("epoch", 0);
  meta.strategy = side.value("strategy", "none");
  meta.seed = side.value("seed", std::uint64_t{0});
  return meta;
}

}  // namespace rbmscope
