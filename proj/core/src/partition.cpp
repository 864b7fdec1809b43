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

#include "rbmscope/partition.hpp"

#include <cmath>

#include "rbmscope/errors.hpp"
#include "rbmscope/parallel.hpp"

namespace rbmscope {

std::string to_string(LogZDirection d) {
  switch (d) {
    case LogZDirection::AIS: return "ais";
    case LogZDirection::RAIS: return "rais";
    case LogZDirection::Exact: return "exact";
  }
  return "unknown";
}

std::vector<double> uniform_schedule(int n_temps) {
  if (n_temps < 1) throw InvalidArgument("schedule needs at least one temperature step");
  std::vector<double> s(static_cast<std::size_t>(n_temps) + 1);
  for (int t = 0; t <= n_temps; ++t) {
    s[static_cast<std::size_t>(t)] = static_cast<double>(t) / static_cast<double>(n_temps);
  }
  return s;
}

namespace {

void validate_schedule(const std::vector<double>& s) {
  if (s.size() < 2 || s.front() != 0.0 || s.back() != 1.0) {
    throw InvalidArgument("schedule must start at 0 and end at 1");
  }
  for (std::size_t t = 1; t < s.size(); ++t) {
    if (s[t] <= s[t - 1]) throw InvalidArgument("schedule must be strictly increasing");
  }
}

std::vector<double> resolve_schedule(const AisConfig& cfg) {
  std::vector<double> s = cfg.schedule.empty() ? uniform_schedule(cfg.n_temps) : cfg.schedule;
  validate_schedule(s);
  return s;
}

/// log Z of the beta = 0 endpoint (independent bits, biases only).
double base_log_z(const RbmParams& params) {
  double log_z = 0.0;
  for (Index i = 0; i < params.a.size(); ++i) log_z += softplus(params.a[i]);
  for (Index j = 0; j < params.b.size(); ++j) log_z += softplus(params.b[j]);
  return log_z;
}

/// One block Gibbs sweep of the interpolated model (W scaled by beta).
void sweep_scaled(const RbmParams& params, double beta, Vector& v, Vector& h, Rng& rng) {
  Vector c = beta * (params.w.transpose() * v) + params.b;
  for (Index j = 0; j < h.size(); ++j) h[j] = rng.bernoulli(sigmoid(c[j])) ? 1.0 : 0.0;
  Vector d = beta * (params.w * h) + params.a;
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.bernoulli(sigmoid(d[i])) ? 1.0 : 0.0;
}

/// Sample the independent-bits base model exactly.
void sample_base(const RbmParams& params, Vector& v, Vector& h, Rng& rng) {
  v.resize(params.n_visible());
  h.resize(params.n_hidden());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.bernoulli(sigmoid(params.a[i])) ? 1.0 : 0.0;
  for (Index j = 0; j < h.size(); ++j) h[j] = rng.bernoulli(sigmoid(params.b[j])) ? 1.0 : 0.0;
}

/// logsumexp-mean and delta-method standard error from per-chain log weights.
struct WeightSummary {
  double log_mean = 0.0;
  double std_err = 0.0;
};

WeightSummary summarize_weights(const Vector& log_w) {
  double shift = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < log_w.size(); ++i) {
    if (std::isfinite(log_w[i])) shift = std::max(shift, log_w[i]);
  }
  if (!std::isfinite(shift)) throw DegenerateWeights("all importance weights are non-finite");
  const double n = static_cast<double>(log_w.size());
  double sum = 0.0, sum_sq = 0.0;
  for (Index i = 0; i < log_w.size(); ++i) {
    const double w = std::isfinite(log_w[i]) ? std::exp(log_w[i] - shift) : 0.0;
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / n;
  WeightSummary out;
  out.log_mean = shift + std::log(mean);
  if (log_w.size() > 1) {
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    out.std_err = std::sqrt(var / n) / mean;
  }
  return out;
}

}  // namespace

LogZEstimate exact_log_z(const RbmParams& params) {
  const Index n = params.n_visible();
  const Index m = params.n_hidden();
  const Index small = std::min(n, m);
  if (small > 25) throw TooLarge("exact log Z needs min(N, M) <= 25");
  const bool hidden_small = m <= n;

  const std::uint64_t n_states = std::uint64_t{1} << small;
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
  return LogZEstimate{logsumexp(logw), 0.0, LogZDirection::Exact};
}

LogZEstimate ais_log_z(const RbmParams& params, const AisConfig& cfg) {
  const auto schedule = resolve_schedule(cfg);
  if (cfg.n_chains < 1) throw InvalidArgument("AIS needs at least one chain");

  Vector log_w(cfg.n_chains);
  parallel_for(static_cast<std::size_t>(cfg.n_chains), [&](std::size_t c) {
    Rng rng = Rng::stream(cfg.seed, {0x616973ULL, c});
    Vector v, h;
    sample_base(params, v, h, rng);
    double lw = 0.0;
    for (std::size_t t = 1; t < schedule.size(); ++t) {
      lw += (schedule[t] - schedule[t - 1]) * v.dot(params.w * h);
      sweep_scaled(params, schedule[t], v, h, rng);
    }
    log_w[static_cast<Index>(c)] = lw;
  });

  const WeightSummary ws = summarize_weights(log_w);
  return LogZEstimate{base_log_z(params) + ws.log_mean, ws.std_err, LogZDirection::AIS};
}

LogZEstimate rais_log_z(const RbmParams& params, const AisConfig& cfg) {
  const auto schedule = resolve_schedule(cfg);
  if (cfg.n_chains < 1) throw InvalidArgument("RAIS needs at least one chain");
  if (cfg.rais_burn_in < 0) throw InvalidArgument("RAIS burn-in must be non-negative");

  Vector log_w(cfg.n_chains);
  parallel_for(static_cast<std::size_t>(cfg.n_chains), [&](std::size_t c) {
    Rng rng = Rng::stream(cfg.seed, {0x72616973ULL, c});
    Vector v, h;
    sample_base(params, v, h, rng);
    for (int k = 0; k < cfg.rais_burn_in; ++k) sweep_scaled(params, 1.0, v, h, rng);

    double lw = 0.0;
    for (std::size_t t = schedule.size() - 1; t >= 1; --t) {
      lw -= (schedule[t] - schedule[t - 1]) * v.dot(params.w * h);
      sweep_scaled(params, schedule[t - 1], v, h, rng);
    }
    log_w[static_cast<Index>(c)] = lw;
  });

  const WeightSummary ws = summarize_weights(log_w);
  return LogZEstimate{base_log_z(params) - ws.log_mean, ws.std_err, LogZDirection::RAIS};
}

double log_likelihood(const RbmParams& params, const BinaryDataset& data, double log_z) {
  if (data.dim() != params.n_visible()) throw DimensionMismatch("dataset dim != N");
  if (data.n_items() == 0) throw EmptyDataset("log-likelihood over an empty dataset");
  double acc = 0.0;
  for (Index i = 0; i < data.n_items(); ++i) {
    acc += -free_energy_visible(params, data.item(i)) - log_z;
  }
  return acc / static_cast<double>(data.n_items());
}

}  // namespace rbmscope
