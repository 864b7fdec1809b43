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

#include "rbmscope/boson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbmscope/errors.hpp"
#include "rbmscope/parallel.hpp"
#include "rbmscope/symmetry.hpp"

namespace rbmscope {

OscillatorSpectrum mode_frequencies(const ReciprocalFrame& frame, double beta, double k_diag) {
  if (beta <= 0.0 || k_diag <= 0.0) throw InvalidArgument("beta and k must be positive");
  OscillatorSpectrum spec;
  spec.beta = beta;
  spec.k_diag = k_diag;
  spec.n_coupled = frame.n_coupled();

  const Index n = frame.n_visible();
  const Index m = frame.n_hidden();
  const Index coupled = spec.n_coupled;
  const Index tail = std::max(n, m) - coupled;

  spec.omegas.resize(n + m);
  for (Index i = 0; i < coupled; ++i) {
    spec.omegas[i] = 0.5 * (k_diag - frame.lambdas[i] * beta);            // u block
    spec.omegas[coupled + i] = 0.5 * (k_diag + frame.lambdas[i] * beta);  // w block
  }
  for (Index i = 0; i < tail; ++i) spec.omegas[2 * coupled + i] = 0.5 * k_diag;

  const double lambda_c = k_diag / beta;
  for (Index i = 0; i < coupled; ++i) {
    if (frame.lambdas[i] > lambda_c) spec.divergent.push_back(i);
  }
  return spec;
}

Excitation excitation(const OscillatorSpectrum& spectrum, const std::vector<int>& occupation) {
  if (static_cast<Index>(occupation.size()) != spectrum.omegas.size()) {
    throw DimensionMismatch("occupation vector must have N + M entries");
  }
  Excitation e;
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (occupation[i] < 0) throw InvalidArgument("occupation numbers must be non-negative");
    e.energy += spectrum.omegas[static_cast<Index>(i)] * occupation[i];
  }
  e.gamma = 0.5 * spectrum.beta * e.energy;
  return e;
}

DivergentReport divergent_modes(const OscillatorSpectrum& spectrum) {
  return DivergentReport{spectrum.divergent, spectrum.k_diag / spectrum.beta};
}

ConstraintMinimum constraint_minimum(const ReciprocalFrame& frame) {
  const ReciprocalMoments moments = reciprocal_moments(frame);
  ConstraintMinimum cm;
  for (Index i = 0; i < frame.n_coupled(); ++i) {
    if (frame.mode_active(i)) cm.coupled_modes.push_back(i);
  }
  const Index active = static_cast<Index>(cm.coupled_modes.size());
  cm.u_star.resize(active);
  cm.w_star.resize(active);
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  for (Index k = 0; k < active; ++k) {
    const Index i = cm.coupled_modes[static_cast<std::size_t>(k)];
    const ModeSaddle s = saddle_point(frame, i);
    const double mx = moments.mu_x[i];
    const double my = moments.mu_y[i];
    cm.u_star[k] = (mx - s.x0 + my - s.y0) * inv_sqrt2;
    cm.w_star[k] = (-(mx - s.x0) + my - s.y0) * inv_sqrt2;
  }

  const Index coupled = frame.n_coupled();
  const bool visible_long = frame.n_visible() >= frame.n_hidden();
  const Index tail = std::max(frame.n_visible(), frame.n_hidden()) - coupled;
  cm.tail_star.resize(tail);
  for (Index t = 0; t < tail; ++t) {
    cm.tail_star[t] = visible_long ? moments.mu_x[coupled + t] : moments.mu_y[coupled + t];
  }
  return cm;
}

namespace {

struct ModeStats {
  double mean = 0.0;
  double sd = 0.0;
};

ModeStats mean_sd(const std::vector<double>& xs) {
  ModeStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

/// Coordinate of a (v, h) pair on one tracked mode: saddle-centered u for
/// coupled modes, raw long-side projection for tail modes.
double mode_coordinate(const ReciprocalFrame& frame, Index mode, const Vector& v,
                       const Vector& h) {
  const bool visible_long = frame.n_visible() >= frame.n_hidden();
  if (mode < frame.n_coupled()) {
    const double x = frame.u.col(mode).dot(v);
    const double y = frame.v.col(mode).dot(h);
    return to_uw(frame, mode, x, y).first;
  }
  return visible_long ? frame.u.col(mode).dot(v) : frame.v.col(mode).dot(h);
}

}  // namespace

LandscapeTrace landscape_trace(const std::vector<std::pair<int, RbmParams>>& checkpoints,
                               const BinaryDataset& test_data, const GibbsConfig& gibbs,
                               const std::vector<Index>& modes) {
  if (checkpoints.empty()) throw InvalidArgument("landscape trace needs checkpoints");
  if (test_data.n_items() == 0) throw EmptyDataset("landscape trace needs test data");

  std::vector<std::vector<LandscapeRecord>> per_epoch(checkpoints.size());
  parallel_for(checkpoints.size(), [&](std::size_t e) {
    const auto& [epoch, params] = checkpoints[e];
    if (test_data.dim() != params.n_visible()) {
      throw DimensionMismatch("test data dim does not match checkpoint");
    }
    const ReciprocalFrame frame = decompose(params);
    const ConstraintMinimum cm = constraint_minimum(frame);

    for (Index mode : modes) {
      if (mode < 0 || mode >= frame.n_modes()) {
        throw IndexOutOfRange("requested landscape mode out of range");
      }
      if (mode < frame.n_coupled() && !frame.mode_active(mode)) {
        throw DegenerateMode("requested coupled mode has a zero singular value");
      }
    }

    // Test set: one conditional hidden draw per item. Streams are keyed by
    // the epoch number so a trace does not depend on which checkpoints were
    // collected around it.
    const auto epoch_key = static_cast<std::uint64_t>(epoch);
    std::vector<Vector> test_pairs_v, test_pairs_h;
    test_pairs_v.reserve(static_cast<std::size_t>(test_data.n_items()));
    test_pairs_h.reserve(static_cast<std::size_t>(test_data.n_items()));
    for (Index i = 0; i < test_data.n_items(); ++i) {
      Rng rng = Rng::stream(gibbs.seed, {0x74657374ULL, epoch_key, static_cast<std::uint64_t>(i)});
      Vector v = test_data.item(i);
      test_pairs_h.push_back(sample_hidden(params, v, rng));
      test_pairs_v.push_back(std::move(v));
    }

    // Fresh block Gibbs samples from uniform starts.
    std::vector<Vector> gibbs_v(gibbs.n_chains), gibbs_h(gibbs.n_chains);
    for (std::size_t c = 0; c < gibbs.n_chains; ++c) {
      Rng rng = Rng::stream(gibbs.seed, {0x67696262ULL, epoch_key, c});
      ChainState state;
      state.v = Vector(params.n_visible());
      state.h = Vector(params.n_hidden());
      for (Index i = 0; i < state.v.size(); ++i) state.v[i] = rng.bit();
      for (Index j = 0; j < state.h.size(); ++j) state.h[j] = rng.bit();
      state = block_gibbs(params, std::move(state), gibbs.k_steps, rng);
      gibbs_v[c] = std::move(state.v);
      gibbs_h[c] = std::move(state.h);
    }

    for (Index mode : modes) {
      LandscapeRecord rec;
      rec.epoch = epoch;
      rec.mode = mode;
      rec.saddle = 0.0;  // u-origin for coupled modes, origin for tail modes
      if (mode < frame.n_coupled()) {
        const auto it = std::find(cm.coupled_modes.begin(), cm.coupled_modes.end(), mode);
        rec.mu = cm.u_star[static_cast<Index>(it - cm.coupled_modes.begin())];
      } else {
        rec.mu = cm.tail_star[mode - frame.n_coupled()];
      }

      std::vector<double> test_coords, gibbs_coords;
      test_coords.reserve(test_pairs_v.size());
      for (std::size_t i = 0; i < test_pairs_v.size(); ++i) {
        test_coords.push_back(mode_coordinate(frame, mode, test_pairs_v[i], test_pairs_h[i]));
      }
      gibbs_coords.reserve(gibbs_v.size());
      for (std::size_t c = 0; c < gibbs_v.size(); ++c) {
        gibbs_coords.push_back(mode_coordinate(frame, mode, gibbs_v[c], gibbs_h[c]));
      }
      const ModeStats t = mean_sd(test_coords);
      const ModeStats g = mean_sd(gibbs_coords);
      rec.test_mean = t.mean;
      rec.test_sd = t.sd;
      rec.gibbs_mean = g.mean;
      rec.gibbs_sd = g.sd;
      per_epoch[e].push_back(rec);
    }
  });

  LandscapeTrace trace;
  for (auto& records : per_epoch) {
    for (auto& r : records) trace.records.push_back(r);
  }
  return trace;
}

}  // namespace rbmscope
