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

#ifndef RBMSCOPE_TRAINING_HPP
#define RBMSCOPE_TRAINING_HPP

#include <functional>
#include <string>
#include <vector>

#include "rbmscope/data.hpp"
#include "rbmscope/rbm.hpp"

namespace rbmscope {

enum class TrainStrategy { RdmK, CD, PCD };

std::string to_string(TrainStrategy s);
TrainStrategy strategy_from_string(const std::string& name);

struct TrainConfig {
  Index n_hidden = 16;
  TrainStrategy strategy = TrainStrategy::CD;
  int k_steps = 100;            // block Gibbs sweeps per update
  double learning_rate = 0.01;  // eta
  std::size_t batch_size = 64;
  int epochs = 10;
  std::size_t n_chains = 64;    // negative-phase chains for RdmK / PCD
  std::uint64_t seed = 0;
  double init_sigma = 0.01;
  bool exact_gradients = false;  // enumeration negative phase (small models)
};

/// Data-side averages over a batch: <v>, <sigmoid(C)>, <v sigmoid(C)^T>.
struct PositiveStats {
  Vector mean_v;          // N
  Vector mean_sigma_c;    // M
  Matrix mean_v_sigma_c;  // N x M
};

/// Model-side averages over chain end states: <v>, <h>, <v h^T>.
struct NegativeStats {
  Vector mean_v;   // N
  Vector mean_h;   // M
  Matrix mean_vh;  // N x M
};

struct Gradients {
  Vector d_a;  // N
  Vector d_b;  // M
  Matrix d_w;  // N x M
};

/// Negative-phase chains carried across PCD updates.
struct PersistentChains {
  std::vector<ChainState> chains;
  bool initialized = false;
};

/// batch is dim x batch_size, one item per column.
PositiveStats positive_stats(const RbmParams& params, const Matrix& batch);

NegativeStats negative_stats(const std::vector<ChainState>& chains);

/// d_a = <v>_data - <v>_model, d_b = <sigmoid(C)>_data - <h>_model,
/// d_W = <v sigmoid(C)^T>_data - <v h^T>_model.
Gradients gradient(const PositiveStats& positive, const NegativeStats& negative);

/// Ascent step theta <- theta + eta * grad.
void sgd_step(RbmParams& params, const Gradients& grads, double learning_rate);

/// Chain initialization per strategy. store must be non-null iff PCD;
/// n_chains is ignored for CD (one chain per batch item).
std::vector<ChainState> make_negative_chains(TrainStrategy strategy, const RbmParams& params,
                                             const Matrix& batch, PersistentChains* store,
                                             std::size_t n_chains, Rng& rng);

/// Exact gradient from the full Boltzmann expectation (N + M <= 24).
Gradients exact_gradient(const RbmParams& params, const Matrix& batch);

/// Exact model moments by enumerating the smaller layer analytically.
NegativeStats exact_model_stats(const RbmParams& params);

struct EpochRecord {
  int epoch = 0;
  double ll_proxy = 0.0;  // mean of -F(v) over the dataset, unnormalized
};

struct TrainingTrace {
  std::vector<EpochRecord> records;
};

/// Called with the initial model as epoch 0 and after each completed epoch.
using EpochCallback = std::function<void(int epoch, const RbmParams& params)>;

struct TrainResult {
  RbmParams params;
  TrainingTrace trace;
};

TrainResult train(const TrainConfig& config, const BinaryDataset& data,
                  const EpochCallback& on_epoch = {});

}  // namespace rbmscope

#endif  // RBMSCOPE_TRAINING_HPP
