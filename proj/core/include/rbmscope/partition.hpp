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

#ifndef RBMSCOPE_PARTITION_HPP
#define RBMSCOPE_PARTITION_HPP

#include <string>
#include <vector>

#include "rbmscope/data.hpp"
#include "rbmscope/rbm.hpp"

namespace rbmscope {

/// Annealing schedule over the coupling scale. The path keeps the biases
/// fixed and multiplies W by beta, so the beta = 0 endpoint is the exactly
/// normalizable independent-bits model.
struct AisConfig {
  int n_temps = 1000;
  int n_chains = 100;
  std::vector<double> schedule;  // derived from n_temps when empty
  std::uint64_t seed = 0;
  int rais_burn_in = 1000;  // target-model equilibration sweeps for RAIS
};

enum class LogZDirection { AIS, RAIS, Exact };

std::string to_string(LogZDirection d);

struct LogZEstimate {
  double log_z = 0.0;
  double std_err = 0.0;
  LogZDirection direction = LogZDirection::Exact;
};

/// 0 = beta_0 < ... < beta_T = 1, uniformly spaced, T = n_temps.
std::vector<double> uniform_schedule(int n_temps);

/// logsumexp over the 2^min(N,M) states of the smaller layer, with the
/// other layer marginalized analytically. Requires min(N,M) <= 25.
LogZEstimate exact_log_z(const RbmParams& params);

LogZEstimate ais_log_z(const RbmParams& params, const AisConfig& cfg);
LogZEstimate rais_log_z(const RbmParams& params, const AisConfig& cfg);

/// Mean over the dataset of -F(v) - log_z.
double log_likelihood(const RbmParams& params, const BinaryDataset& data, double log_z);

}  // namespace rbmscope

#endif  // RBMSCOPE_PARTITION_HPP
