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

#ifndef RBMSCOPE_SPECTRAL_HPP
#define RBMSCOPE_SPECTRAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "rbmscope/histogram.hpp"
#include "rbmscope/rbm.hpp"

namespace rbmscope {

struct ModeSaddle {
  Index mode = 0;       // 0-based, only modes with lambda above tolerance
  double x0 = 0.0;      // -b0 / lambda
  double y0 = 0.0;      // -a0 / lambda
  double energy = 0.0;  // a0 * b0 / lambda
};

/// SVD frame of the coupling matrix: W = U Sigma V^t with full square
/// orthogonal factors, plus the projected biases and per-mode saddles.
/// Immutable after construction; projections are safe to share.
struct ReciprocalFrame {
  Matrix u;        // N x N
  Matrix v;        // M x M
  Vector lambdas;  // min(N,M), descending
  Vector a0;       // U^t a, length N
  Vector b0;       // V^t b, length M
  std::vector<ModeSaddle> saddles;
  double lambda_tolerance = 0.0;  // modes at or below this count as zero

  Index n_visible() const { return u.rows(); }
  Index n_hidden() const { return v.rows(); }
  Index n_coupled() const { return lambdas.size(); }
  Index n_modes() const { return std::max(n_visible(), n_hidden()); }
  bool mode_active(Index i) const {
    return i < n_coupled() && lambdas[i] > lambda_tolerance;
  }
};

/// Full SVD with a reproducible gauge: each coupled column pair (U_i, V_i) is
/// flipped so the largest-magnitude entry of U_i is positive; exact singular
/// value ties are ordered by lexicographic comparison of the U columns.
ReciprocalFrame decompose(const RbmParams& params);

/// x = U^t v
Vector project_visible(const ReciprocalFrame& frame, const Vector& v);
/// y = V^t h
Vector project_hidden(const ReciprocalFrame& frame, const Vector& h);

/// Per-mode energy: -a0 x - b0 y - lambda x y for coupled modes, and the
/// bias term of the longer side alone for tail modes.
double mode_energy(const ReciprocalFrame& frame, Index mode, double x, double y);

/// Closed-form stationary point of mode_energy; requires an active mode.
ModeSaddle saddle_point(const ReciprocalFrame& frame, Index mode);

/// Saddle-centered pi/4 rotation: E_i = a0 b0 / lambda - lambda/2 (u^2 - w^2).
std::pair<double, double> to_uw(const ReciprocalFrame& frame, Index mode, double x, double y);
std::pair<double, double> from_uw(const ReciprocalFrame& frame, Index mode, double u, double w);

/// Marchenko-Pastur singular value law for a Gaussian(0, sigma^2) matrix.
struct MpLaw {
  double sigma = 0.0;
  Index n = 0;
  Index m = 0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double lambda_peak = 0.0;  // sigma * sqrt(|n - m|)
};

MpLaw make_mp_law(Index n, Index m, double sigma);

/// Density sqrt((l+^2 - l^2)(l^2 - l-^2)) / (pi q l) on (l-, l+), 0 outside.
double mp_density(const MpLaw& law, double lambda);

/// Singular values only (descending), via the Gram matrix of the smaller
/// side; much faster than a full decomposition for wide matrices.
Vector singular_values(const Matrix& w);

struct SpectralReport {
  Vector lambdas;  // all min(N,M) singular values, descending
  MpLaw law;
  std::vector<double> mp_grid;     // density curve sample locations
  std::vector<double> mp_values;   // density at mp_grid
  Histogram histogram;             // of singular values above tolerance
  std::vector<ModeSaddle> saddles;
  Vector a0;
  Vector b0;
  Index n_visible = 0;
  Index n_hidden = 0;
};

SpectralReport spectrum_report(const ReciprocalFrame& frame, const MpLaw& law,
                               int histogram_bins = 60);

/// One row per mode: mode, lambda, a0, b0, x0, y0, e_saddle. Undefined cells
/// are left empty. Mode ids are 1-based in serialized output.
std::string report_to_csv(const SpectralReport& report);
std::string report_to_json(const SpectralReport& report);

}  // namespace rbmscope

#endif  // RBMSCOPE_SPECTRAL_HPP
