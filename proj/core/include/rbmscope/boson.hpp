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

#ifndef RBMSCOPE_BOSON_HPP
#define RBMSCOPE_BOSON_HPP

#include <utility>
#include <vector>

#include "rbmscope/data.hpp"
#include "rbmscope/spectral.hpp"

namespace rbmscope {

/// Harmonic spectrum of the effective potential in the Gaussian
/// approximation, where the constraint curvature is k_diag per mode.
/// Frequencies are (k - lambda beta)/2 on the u block, (k + lambda beta)/2 on
/// the w block and k/2 on the tail, N + M in total.
struct OscillatorSpectrum {
  double beta = 1.0;
  double k_diag = 4.0;
  Index n_coupled = 0;           // min(N, M)
  Vector omegas;                 // length N + M
  std::vector<Index> divergent;  // coupled modes with lambda > k_diag / beta
};

OscillatorSpectrum mode_frequencies(const ReciprocalFrame& frame, double beta = 1.0,
                                    double k_diag = 4.0);

/// E(n) = sum_i omega_i n_i and relaxation rate Gamma = beta E / 2.
struct Excitation {
  double energy = 0.0;
  double gamma = 0.0;
};

Excitation excitation(const OscillatorSpectrum& spectrum, const std::vector<int>& occupation);

struct DivergentReport {
  std::vector<Index> modes;  // exactly { i : lambda_i > lambda_c }, strict
  double lambda_c = 0.0;     // k_diag / beta
};

DivergentReport divergent_modes(const OscillatorSpectrum& spectrum);

/// High-temperature saddle-point means, evaluated with <v> = <h> = 1/2:
/// per active coupled mode the (u*, w*) pair, and the projected mean of the
/// longer side for tail modes.
struct ConstraintMinimum {
  std::vector<Index> coupled_modes;  // active modes, ascending
  Vector u_star;
  Vector w_star;
  Vector tail_star;  // length max(N,M) - min(N,M)
};

ConstraintMinimum constraint_minimum(const ReciprocalFrame& frame);

struct GibbsConfig {
  std::size_t n_chains = 512;
  int k_steps = 200;
  std::uint64_t seed = 0;
};

/// One landscape sample per epoch and requested mode. Coupled modes are
/// tracked in the saddle-centered u coordinate (saddle at 0); tail modes in
/// the raw projection of the longer side.
struct LandscapeRecord {
  int epoch = 0;
  Index mode = 0;  // 0-based
  double mu = 0.0;
  double saddle = 0.0;
  double test_mean = 0.0;
  double test_sd = 0.0;
  double gibbs_mean = 0.0;
  double gibbs_sd = 0.0;
};

struct LandscapeTrace {
  std::vector<LandscapeRecord> records;  // epoch-major, then mode order
};

LandscapeTrace landscape_trace(const std::vector<std::pair<int, RbmParams>>& checkpoints,
                               const BinaryDataset& test_data, const GibbsConfig& gibbs,
                               const std::vector<Index>& modes);

}  // namespace rbmscope

#endif  // RBMSCOPE_BOSON_HPP
