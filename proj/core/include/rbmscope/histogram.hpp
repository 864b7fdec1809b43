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

#ifndef RBMSCOPE_HISTOGRAM_HPP
#define RBMSCOPE_HISTOGRAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rbmscope/errors.hpp"

namespace rbmscope {

struct Histogram {
  std::vector<double> bin_edges;        // strictly increasing, counts.size() + 1
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline std::vector<double> uniform_edges(double lo, double hi, int n_bins) {
  if (n_bins < 1) throw InvalidArgument("histogram needs at least one bin");
  if (!(hi > lo)) throw InvalidArgument("histogram range must be non-empty");
  std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
  for (int i = 0; i <= n_bins; ++i) {
    edges[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  }
  edges.back() = hi;
  return edges;
}

/// Bins samples on uniform edges; the top edge is inclusive, values outside
/// the range are dropped.
inline Histogram make_histogram(std::span<const double> samples, std::vector<double> edges) {
  if (edges.size() < 2) throw InvalidArgument("histogram needs at least two edges");
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  const double lo = edges.front();
  const double hi = edges.back();
  const double width = (hi - lo) / static_cast<double>(h.counts.size());
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto bin = static_cast<std::size_t>((x - lo) / width);
    if (bin >= h.counts.size()) bin = h.counts.size() - 1;
    ++h.counts[bin];
  }
  h.bin_edges = std::move(edges);
  return h;
}

}  // namespace rbmscope

#endif  // RBMSCOPE_HISTOGRAM_HPP
