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

#include "rbmscope/data.hpp"

#include <fstream>
#include <numeric>

#include "rbmscope/errors.hpp"

namespace rbmscope {

namespace {

constexpr std::uint32_t kMagicImages = 0x00000803;
constexpr std::uint32_t kMagicLabels = 0x00000801;

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void write_be32(std::uint32_t v, std::ofstream& out) {
  const std::uint8_t bytes[4] = {
      std::uint8_t(v >> 24), std::uint8_t(v >> 16), std::uint8_t(v >> 8), std::uint8_t(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Truncated("cannot open IDX file: " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return bytes;
}

}  // namespace

BinaryDataset::BinaryDataset(Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits,
                             std::vector<int> labels)
    : bits_(std::move(bits)), labels_(std::move(labels)) {
  for (Index j = 0; j < bits_.cols(); ++j) {
    for (Index i = 0; i < bits_.rows(); ++i) {
      if (bits_(i, j) > 1) throw InvalidArgument("dataset entries must be 0 or 1");
    }
  }
  if (!labels_.empty() && static_cast<Index>(labels_.size()) != bits_.cols()) {
    throw DimensionMismatch("label count does not match item count");
  }
}

Matrix BinaryDataset::gather(const std::vector<std::size_t>& indices) const {
  Matrix out(dim(), static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<Index>(k)) = bits_.col(static_cast<Index>(indices[k])).cast<double>();
  }
  return out;
}

ImageSet load_idx(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() < 4) throw Truncated("IDX file shorter than its magic word");
  const std::uint32_t magic = read_be32(bytes.data());

  if (magic == kMagicImages) {
    if (bytes.size() < 16) throw Truncated("IDX image header truncated");
    ImageSet s;
    s.n_items = read_be32(bytes.data() + 4);
    s.rows = read_be32(bytes.data() + 8);
    s.cols = read_be32(bytes.data() + 12);
    if (s.rows * s.cols == 0) throw Truncated("IDX image dimensions are zero");
    const std::size_t payload = s.n_items * s.rows * s.cols;
    if (bytes.size() < 16 + payload) {
      throw Truncated("IDX payload shorter than the header promises");
    }
    s.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
    return s;
  }
  if (magic == kMagicLabels) {
    if (bytes.size() < 8) throw Truncated("IDX label header truncated");
    ImageSet s;
    s.n_items = read_be32(bytes.data() + 4);
    s.rows = 1;
    s.cols = 1;
    if (bytes.size() < 8 + s.n_items) {
      throw Truncated("IDX payload shorter than the header promises");
    }
    s.pixels.assign(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(s.n_items));
    return s;
  }
  throw BadMagic("unknown IDX magic word");
}

void write_idx(const ImageSet& images, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write IDX file: " + path.string());
  const bool labels = images.rows == 1 && images.cols == 1;
  write_be32(labels ? kMagicLabels : kMagicImages, out);
  write_be32(static_cast<std::uint32_t>(images.n_items), out);
  if (!labels) {
    write_be32(static_cast<std::uint32_t>(images.rows), out);
    write_be32(static_cast<std::uint32_t>(images.cols), out);
  }
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
  const ImageSet s = load_idx(path);
  if (s.rows != 1 || s.cols != 1) throw BadMagic("not an IDX label file");
  return std::vector<int>(s.pixels.begin(), s.pixels.end());
}

BinaryDataset binarize(const ImageSet& images, int threshold, std::vector<int> labels) {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits(
      static_cast<Index>(images.dim()), static_cast<Index>(images.n_items));
  for (std::size_t item = 0; item < images.n_items; ++item) {
    const std::uint8_t* px = images.pixels.data() + item * images.dim();
    for (std::size_t i = 0; i < images.dim(); ++i) {
      bits(static_cast<Index>(i), static_cast<Index>(item)) = px[i] > threshold ? 1 : 0;
    }
  }
  return BinaryDataset(std::move(bits), std::move(labels));
}

std::vector<std::vector<std::size_t>> minibatches(const BinaryDataset& data,
                                                  std::size_t batch_size,
                                                  std::uint64_t seed) {
  if (data.n_items() == 0) throw EmptyDataset("cannot batch an empty dataset");
  if (batch_size < 1) throw InvalidArgument("batch_size must be at least 1");
  std::vector<std::size_t> order(static_cast<std::size_t>(data.n_items()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

BinaryDataset synthetic_bars_stripes(std::size_t side, std::size_t n_items,
                                     std::uint64_t seed) {
  if (side < 2) throw InvalidArgument("bars-and-stripes needs side >= 2");
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits(
      static_cast<Index>(side * side), static_cast<Index>(n_items));
  std::vector<int> labels(n_items);
  Rng rng(seed);
  for (std::size_t item = 0; item < n_items; ++item) {
    const bool columns = rng.bernoulli(0.5);
    labels[item] = columns ? 1 : 0;
    std::vector<std::uint8_t> line(side);
    for (auto& on : line) on = rng.bernoulli(0.5) ? 1 : 0;
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        bits(static_cast<Index>(r * side + c), static_cast<Index>(item)) =
            columns ? line[c] : line[r];
      }
    }
  }
  return BinaryDataset(std::move(bits), std::move(labels));
}

}  // namespace rbmscope
