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

#ifndef RBMSCOPE_DATA_HPP
#define RBMSCOPE_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rbmscope/numeric.hpp"
#include "rbmscope/rng.hpp"

namespace rbmscope {

/// Raw byte images as stored in an IDX container, row-major per item.
struct ImageSet {
  std::size_t n_items = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // n_items * rows * cols

  std::size_t dim() const { return rows * cols; }
};

/// Immutable set of {0,1} vectors. Items are stored as uint8 columns and
/// expanded to double precision on access; safe to share across threads.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits,
                std::vector<int> labels = {});

  Index dim() const { return bits_.rows(); }
  Index n_items() const { return bits_.cols(); }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }
  const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& bits() const { return bits_; }

  Vector item(Index i) const { return bits_.col(i).cast<double>(); }

  /// dim x indices.size() matrix of the selected items.
  Matrix gather(const std::vector<std::size_t>& indices) const;

  /// dim x n_items matrix of all items.
  Matrix all() const { return bits_.cast<double>(); }

 private:
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits_;
  std::vector<int> labels_;
};

/// Parses a big-endian IDX container. Accepts image files (magic 0x00000803)
/// and label files (magic 0x00000801, returned as n x 1 x 1).
ImageSet load_idx(const std::filesystem::path& path);

/// Serializes back to IDX bytes; load_idx(write_idx(s)) is bit-exact.
void write_idx(const ImageSet& images, const std::filesystem::path& path);

/// Label file convenience reader (magic 0x00000801).
std::vector<int> load_idx_labels(const std::filesystem::path& path);

/// bit = 1 iff intensity > threshold.
BinaryDataset binarize(const ImageSet& images, int threshold = 127,
                       std::vector<int> labels = {});

/// Seeded random permutation of item indices, chunked into disjoint batches.
/// The final batch may be smaller.
std::vector<std::vector<std::size_t>> minibatches(const BinaryDataset& data,
                                                  std::size_t batch_size,
                                                  std::uint64_t seed);

/// side x side grids filled row-wise or column-wise with random on/off lines.
/// Labels record the orientation (0 = bars/rows, 1 = stripes/columns).
BinaryDataset synthetic_bars_stripes(std::size_t side, std::size_t n_items,
                                     std::uint64_t seed);

}  // namespace rbmscope

#endif  // RBMSCOPE_DATA_HPP
