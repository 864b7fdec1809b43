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

#ifndef RBMSCOPE_CHECKPOINT_HPP
#define RBMSCOPE_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "rbmscope/rbm.hpp"

namespace rbmscope {

/// Human-readable sidecar written next to each checkpoint as <path>.json.
struct CheckpointMeta {
  int epoch = 0;
  std::string strategy = "none";
  std::uint64_t seed = 0;
};

/// Binary container: magic "RBMCKPT\0", u32 version, u64 N, u64 M, then
/// a, b and row-major W as little-endian IEEE-754 doubles.
void save_checkpoint(const RbmParams& params, const std::filesystem::path& path,
                     const CheckpointMeta& meta = {});

RbmParams load_checkpoint(const std::filesystem::path& path);
CheckpointMeta load_checkpoint_meta(const std::filesystem::path& path);

}  // namespace rbmscope

#endif  // RBMSCOPE_CHECKPOINT_HPP
