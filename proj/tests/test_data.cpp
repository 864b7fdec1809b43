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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "rbmscope/data.hpp"
#include "rbmscope/errors.hpp"

using namespace rbmscope;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rbmscope_test_" + name);
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_SUITE_BEGIN("data");

TEST_CASE("load_idx decodes a hand-crafted image container") {
  const auto path = temp_file("tiny.idx");
  // magic 0x00000803, 1 item, 2 x 2, pixels 10 20 30 40
  write_bytes(path, {0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x02,
                     0x00, 0x00, 0x00, 0x02, 10, 20, 30, 40});
  const ImageSet s = load_idx(path);
  CHECK(s.n_items == 1);
  CHECK(s.rows == 2);
  CHECK(s.cols == 2);
  CHECK(s.pixels == std::vector<std::uint8_t>{10, 20, 30, 40});
  std::filesystem::remove(path);
}

TEST_CASE("load_idx rejects unknown magic words") {
  const auto path = temp_file("badmagic.idx");
  write_bytes(path, {0x00, 0x00, 0x08, 0x02, 0x00, 0x00, 0x00, 0x01});
  CHECK_THROWS_AS(load_idx(path), BadMagic);
  std::filesystem::remove(path);
}

TEST_CASE("load_idx rejects short payloads") {
  const auto path = temp_file("short.idx");
  // Header promises 10 items of 1x1 but only 5 bytes follow.
  write_bytes(path, {0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x0a, 0x00, 0x00, 0x00, 0x01,
                     0x00, 0x00, 0x00, 0x01, 1, 2, 3, 4, 5});
  CHECK_THROWS_AS(load_idx(path), Truncated);
  std::filesystem::remove(path);
}

TEST_CASE("idx round trip is bit exact") {
  Rng rng(5);
  ImageSet s;
  s.n_items = 7;
  s.rows = 3;
  s.cols = 5;
  s.pixels.resize(s.n_items * s.dim());
  for (auto& p : s.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(256));
  const auto path = temp_file("roundtrip.idx");
  write_idx(s, path);
  const ImageSet back = load_idx(path);
  CHECK(back.n_items == s.n_items);
  CHECK(back.rows == s.rows);
  CHECK(back.cols == s.cols);
  CHECK(back.pixels == s.pixels);
  std::filesystem::remove(path);
}

TEST_CASE("label containers load through the same parser") {
  const auto path = temp_file("labels.idx");
  write_bytes(path, {0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x03, 7, 0, 2});
  const auto labels = load_idx_labels(path);
  CHECK(labels == std::vector<int>{7, 0, 2});
  std::filesystem::remove(path);
}

TEST_CASE("binarize thresholds strictly above") {
  ImageSet s;
  s.n_items = 1;
  s.rows = 1;
  s.cols = 2;

  s.pixels = {0, 0};
  CHECK(binarize(s, 127).item(0).isZero());

  s.pixels = {255, 255};
  CHECK(binarize(s, 127).item(0).isOnes());

  s.pixels = {100, 200};
  const Vector bits = binarize(s, 127).item(0);
  CHECK(bits[0] == 0.0);
  CHECK(bits[1] == 1.0);

  // Threshold value itself maps to 0.
  s.pixels = {127, 128};
  const Vector edge = binarize(s, 127).item(0);
  CHECK(edge[0] == 0.0);
  CHECK(edge[1] == 1.0);
}

TEST_CASE("binarization is monotone in the threshold") {
  Rng rng(11);
  ImageSet s;
  s.n_items = 4;
  s.rows = 4;
  s.cols = 4;
  s.pixels.resize(s.n_items * s.dim());
  for (auto& p : s.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(256));
  const BinaryDataset low = binarize(s, 50);
  const BinaryDataset high = binarize(s, 180);
  for (Index i = 0; i < low.n_items(); ++i) {
    const Vector a = low.item(i);
    const Vector b = high.item(i);
    for (Index d = 0; d < a.size(); ++d) CHECK(b[d] <= a[d]);
  }
}

TEST_CASE("minibatches partition the dataset") {
  const BinaryDataset data = synthetic_bars_stripes(2, 10, 3);

  SUBCASE("exact division") {
    const auto batches = minibatches(data, 5, 1);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0].size() == 5);
    CHECK(batches[1].size() == 5);
  }
  SUBCASE("remainder goes to the final batch") {
    const auto batches = minibatches(data, 4, 1);
    REQUIRE(batches.size() == 3);
    CHECK(batches[0].size() == 4);
    CHECK(batches[1].size() == 4);
    CHECK(batches[2].size() == 2);
  }
  SUBCASE("coverage is exact for any batch size") {
    for (std::size_t bs : {1, 3, 7, 10, 11}) {
      std::set<std::size_t> seen;
      std::size_t total = 0;
      for (const auto& batch : minibatches(data, bs, 9)) {
        for (auto i : batch) seen.insert(i);
        total += batch.size();
      }
      CHECK(total == 10);
      CHECK(seen.size() == 10);
    }
  }
  SUBCASE("same seed gives the same order") {
    CHECK(minibatches(data, 3, 42) == minibatches(data, 3, 42));
  }
  SUBCASE("empty dataset is rejected") {
    CHECK_THROWS_AS(minibatches(BinaryDataset{}, 4, 0), EmptyDataset);
  }
}

TEST_CASE("bars and stripes items always belong to the pattern family") {
  const auto family = oracles::bars_stripes_family(2);
  const BinaryDataset data = synthetic_bars_stripes(2, 64, 17);
  CHECK(data.dim() == 4);
  for (Index i = 0; i < data.n_items(); ++i) {
    std::vector<int> grid(4);
    for (Index d = 0; d < 4; ++d) grid[static_cast<std::size_t>(d)] = data.bits()(d, i);
    CHECK(family.count(grid) == 1);
  }
}

TEST_CASE("bars and stripes is reproducible and guards its precondition") {
  const BinaryDataset a = synthetic_bars_stripes(3, 20, 5);
  const BinaryDataset b = synthetic_bars_stripes(3, 20, 5);
  CHECK(a.bits() == b.bits());
  CHECK(a.labels() == b.labels());
  CHECK_THROWS_AS(synthetic_bars_stripes(1, 4, 0), InvalidArgument);
}

TEST_SUITE_END();
