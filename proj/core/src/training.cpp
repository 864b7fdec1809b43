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

#include "rbmscope/training.hpp"

#include "rbmscope/errors.hpp"
#include "rbmscope/parallel.hpp"

namespace rbmscope {

std::string to_string(TrainStrategy s) {
  switch (s) {
    case TrainStrategy::RdmK: return "rdmk";
    case TrainStrategy::CD: return "cd";
    case TrainStrategy::PCD: return "pcd";
  }
  return "unknown";
}

TrainStrategy strategy_from_string(const std::string& name) {
  if (name == "rdmk") return TrainStrategy::RdmK;
  if (name == "cd") return TrainStrategy::CD;
  if (name == "pcd") return TrainStrategy::PCD;
  throw ParseError("unknown training strategy: " + name);
}

PositiveStats positive_stats(const RbmParams& params, const Matrix& batch) {
  if (batch.cols() == 0) throw EmptyBatch("positive phase needs a non-empty batch");
  if (batch.rows() != params.n_visible()) throw DimensionMismatch("batch dim != N");
  const Index n = params.n_visible();
  const Index m = params.n_hidden();
  PositiveStats s{Vector::Zero(n), Vector::Zero(m), Matrix::Zero(n, m)};
  for (Index k = 0; k < batch.cols(); ++k) {
    const Vector v = batch.col(k);
    Vector sig_c = hidden_field(params, v);
    for (Index j = 0; j < m; ++j) sig_c[j] = sigmoid(sig_c[j]);
    s.mean_v += v;
    s.mean_sigma_c += sig_c;
    s.mean_v_sigma_c += v * sig_c.transpose();
  }
  const double inv = 1.0 / static_cast<double>(batch.cols());
  s.mean_v *= inv;
  s.mean_sigma_c *= inv;
  s.mean_v_sigma_c *= inv;
  return s;
}

NegativeStats negative_stats(const std::vector<ChainState>& chains) {
  if (chains.empty()) throw NoChains("negative phase needs at least one chain");
  const Index n = chains.front().v.size();
  const Index m = chains.front().h.size();
  NegativeStats s{Vector::Zero(n), Vector::Zero(m), Matrix::Zero(n, m)};
  for (const auto& c : chains) {
    if (c.v.size() != n || c.h.size() != m) throw DimensionMismatch("inconsistent chain shapes");
    s.mean_v += c.v;
    s.mean_h += c.h;
    s.mean_vh += c.v * c.h.transpose();
  }
  const double inv = 1.0 / static_cast<double>(chains.size());
  s.mean_v *= inv;
  s.mean_h *= inv;
  s.mean_vh *= inv;
  return s;
}

Gradients gradient(const PositiveStats& positive, const NegativeStats& negative) {
  if (positive.mean_v.size() != negative.mean_v.size() ||
      positive.mean_sigma_c.size() != negative.mean_h.size()) {
    throw DimensionMismatch("positive and negative statistics disagree in shape");
  }
  return Gradients{positive.mean_v - negative.mean_v,
                   positive.mean_sigma_c - negative.mean_h,
                   positive.mean_v_sigma_c - negative.mean_vh};
}

void sgd_step(RbmParams& params, const Gradients& grads, double learning_rate) {
  if (learning_rate < 0.0) throw InvalidArgument("learning rate must be non-negative");
  if (grads.d_a.size() != params.n_visible() || grads.d_b.size() != params.n_hidden()) {
    throw DimensionMismatch("gradient shape does not match parameters");
  }
  params.a += learning_rate * grads.d_a;
  params.b += learning_rate * grads.d_b;
  params.w += learning_rate * grads.d_w;
}

std::vector<ChainState> make_negative_chains(TrainStrategy strategy, const RbmParams& params,
                                             const Matrix& batch, PersistentChains* store,
                                             std::size_t n_chains, Rng& rng) {
  if ((strategy == TrainStrategy::PCD) != (store != nullptr)) {
    throw MissingPersistentStore("persistent store is required exactly for PCD");
  }
  const Index n = params.n_visible();
  const Index m = params.n_hidden();

  auto data_seeded = [&](std::size_t count) {
    if (batch.cols() == 0) throw EmptyBatch("chain seeding needs a non-empty batch");
    std::vector<ChainState> chains(count);
    for (std::size_t c = 0; c < count; ++c) {
      chains[c].v = batch.col(static_cast<Index>(c % static_cast<std::size_t>(batch.cols())));
      chains[c].h = Vector::Zero(m);
    }
    return chains;
  };

  switch (strategy) {
    case TrainStrategy::RdmK: {
      std::vector<ChainState> chains(n_chains);
      for (auto& c : chains) {
        c.v = Vector(n);
        c.h = Vector(m);
        for (Index i = 0; i < n; ++i) c.v[i] = rng.bit();
        for (Index j = 0; j < m; ++j) c.h[j] = rng.bit();
      }
      return chains;
    }
    case TrainStrategy::CD:
      return data_seeded(static_cast<std::size_t>(batch.cols()));
    case TrainStrategy::PCD: {
      if (!store->initialized) {
        store->chains = data_seeded(n_chains);
        store->initialized = true;
      }
      return store->chains;
    }
  }
  throw InvalidArgument("unknown training strategy");
}

NegativeStats exact_model_stats(const RbmParams& params) {
  const Index n = params.n_visible();
  const Index m = params.n_hidden();
  if (n + m > 24) throw TooLarge("exact model statistics need N + M <= 24");

  // Enumerate the smaller layer; the other layer factorizes given it.
  const bool hidden_small = m <= n;
  const Index small = hidden_small ? m : n;

  NegativeStats stats{Vector::Zero(n), Vector::Zero(m), Matrix::Zero(n, m)};
  const std::uint64_t n_states = std::uint64_t{1} << small;

  // First pass: log weights for normalization.
  Vector logw(static_cast<Index>(n_states));
  Vector state(small);
  for (std::uint64_t s = 0; s < n_states; ++s) {
    for (Index i = 0; i < small; ++i) state[i] = (s >> i) & 1 ? 1.0 : 0.0;
    double lw;
    if (hidden_small) {
      lw = params.b.dot(state);
      const Vector d = params.w * state + params.a;
      for (Index i = 0; i < n; ++i) lw += softplus(d[i]);
    } else {
      lw = params.a.dot(state);
      const Vector c = params.w.transpose() * state + params.b;
      for (Index j = 0; j < m; ++j) lw += softplus(c[j]);
    }
    logw[static_cast<Index>(s)] = lw;
  }
  const double log_z = logsumexp(logw);

  for (std::uint64_t s = 0; s < n_states; ++s) {
    for (Index i = 0; i < small; ++i) state[i] = (s >> i) & 1 ? 1.0 : 0.0;
    const double p = std::exp(logw[static_cast<Index>(s)] - log_z);
    if (hidden_small) {
      Vector cond = params.w * state + params.a;  // <v|h> = sigmoid(D(h))
      for (Index i = 0; i < n; ++i) cond[i] = sigmoid(cond[i]);
      stats.mean_v += p * cond;
      stats.mean_h += p * state;
      stats.mean_vh += p * cond * state.transpose();
    } else {
      Vector cond = params.w.transpose() * state + params.b;  // <h|v>
      for (Index j = 0; j < m; ++j) cond[j] = sigmoid(cond[j]);
      stats.mean_v += p * state;
      stats.mean_h += p * cond;
      stats.mean_vh += p * state * cond.transpose();
    }
  }
  return stats;
}

Gradients exact_gradient(const RbmParams& params, const Matrix& batch) {
  return gradient(positive_stats(params, batch), exact_model_stats(params));
}

namespace {

std::vector<ChainState> run_negative_phase(const RbmParams& params,
                                           std::vector<ChainState> chains, int k_steps,
                                           std::uint64_t seed, std::uint64_t update_id) {
  parallel_for(chains.size(), [&](std::size_t c) {
    Rng chain_rng = Rng::stream(seed, {0x6e65676174ULL, update_id, c});
    chains[c] = block_gibbs(params, std::move(chains[c]), k_steps, chain_rng);
  });
  return chains;
}

double ll_proxy(const RbmParams& params, const BinaryDataset& data) {
  double acc = 0.0;
  for (Index i = 0; i < data.n_items(); ++i) {
    acc -= free_energy_visible(params, data.item(i));
  }
  return acc / static_cast<double>(data.n_items());
}

}  // namespace

TrainResult train(const TrainConfig& config, const BinaryDataset& data,
                  const EpochCallback& on_epoch) {
  if (data.n_items() == 0) throw EmptyDataset("cannot train on an empty dataset");
  if (config.k_steps < 1) throw InvalidArgument("k_steps must be at least 1");
  if (config.learning_rate < 0.0) throw InvalidArgument("learning rate must be non-negative");
  if (config.n_chains < 1) throw InvalidArgument("n_chains must be at least 1");
  if (config.init_sigma < 0.0) throw InvalidArgument("init sigma must be non-negative");

  Rng init_rng = Rng::stream(config.seed, {0x696e6974ULL});
  RbmParams params = init_params(data.dim(), config.n_hidden, config.init_sigma, init_rng);

  TrainingTrace trace;
  trace.records.push_back({0, ll_proxy(params, data)});
  if (on_epoch) on_epoch(0, params);

  PersistentChains persistent;
  std::uint64_t update_id = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto batches =
        minibatches(data, config.batch_size, Rng::derive(config.seed, {0x7368756646ULL, static_cast<std::uint64_t>(epoch)}));
    for (const auto& batch_indices : batches) {
      const Matrix batch = data.gather(batch_indices);
      const PositiveStats positive = positive_stats(params, batch);

      Gradients grads;
      if (config.exact_gradients) {
        grads = gradient(positive, exact_model_stats(params));
      } else {
        Rng chain_init_rng = Rng::stream(config.seed, {0x636861696eULL, update_id});
        auto chains = make_negative_chains(
            config.strategy, params, batch,
            config.strategy == TrainStrategy::PCD ? &persistent : nullptr, config.n_chains,
            chain_init_rng);
        chains = run_negative_phase(params, std::move(chains), config.k_steps, config.seed,
                                    update_id);
        if (config.strategy == TrainStrategy::PCD) persistent.chains = chains;
        grads = gradient(positive, negative_stats(chains));
      }
      sgd_step(params, grads, config.learning_rate);
      ++update_id;
    }
    trace.records.push_back({epoch, ll_proxy(params, data)});
    if (on_epoch) on_epoch(epoch, params);
  }
  return TrainResult{std::move(params), std::move(trace)};
}

}  // namespace rbmscope
