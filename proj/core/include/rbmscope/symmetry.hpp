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

#ifndef RBMSCOPE_SYMMETRY_HPP
#define RBMSCOPE_SYMMETRY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "rbmscope/histogram.hpp"
#include "rbmscope/spectral.hpp"

namespace rbmscope {

/// Burst of random planar rotations. A rotation "around an (n-2)-subspace"
/// is realized as a rotation inside the orthogonal 2-plane; the burst
/// composes n_rotations of them with random planes and angles.
struct RotationPlan {
  Index dim = 0;
  int n_rotations = 0;
  std::vector<Index> protected_modes;  // coordinates every plane must avoid
  std::optional<double> angle;         // fixed angle; random in [0, 2pi) if unset
  std::uint64_t seed = 0;
};

/// Rotation by angle inside the plane of two orthonormal vectors, identity on
/// the orthogonal complement.
Matrix rotation_nd(Index dim, const Vector& plane_e, const Vector& plane_f, double angle);

Matrix random_rotation_burst(const RotationPlan& plan, Rng& rng);

/// W_R = (R U R^t) Sigma V^t; the singular spectrum is preserved.
Matrix rotate_frame(const ReciprocalFrame& frame, const Matrix& rotation);

/// Jensen-Shannon divergence between two histograms on identical edges,
/// natural log, in [0, ln 2].
double jensen_divergence(const Histogram& p, const Histogram& q);

/// Applies bursts to both eigenvector matrices, rebuilds the coupling matrix
/// and returns the JSD between the entry histograms of W and W_R.
double rotation_symmetry_probe(const RbmParams& params, const RotationPlan& plan_visible,
                               const RotationPlan& plan_hidden, int n_bins, Rng& rng);

struct SymmetryProbeResult {
  double jsd = 0.0;
  Histogram original;
  Histogram rotated;
};

SymmetryProbeResult rotation_symmetry_probe_detail(const RbmParams& params,
                                                   const RotationPlan& plan_visible,
                                                   const RotationPlan& plan_hidden, int n_bins,
                                                   Rng& rng);

/// Default probe plans per the 0.1 N / 0.1 M rotation counts.
RotationPlan default_probe_plan(Index dim, double rotations_fraction = 0.1);

/// JSD between histograms of two disjoint random halves of W's entries;
/// a model-specific sampling-noise floor for the probe score.
double self_resampling_baseline(const RbmParams& params, int n_bins, Rng& rng);

enum class RotationExperiment {
  Identity,            // no rotation; before and after coincide
  Top2Pi,              // pi rotation in the plane of the two leading U columns
  Top5ProtectedBurst,  // 10 random rotations in planes orthogonal to the top-5 modes
};

/// Visible activations sigma(U_R Sigma V^t h + a) before and after rotating
/// the eigenvector matrix. hidden_states is M x n_samples.
struct RotatedReconstruction {
  Matrix before;  // N x n_samples
  Matrix after;   // N x n_samples
};

RotatedReconstruction hierarchical_rotation(const RbmParams& params, const Matrix& hidden_states,
                                            RotationExperiment mode, Rng& rng);

/// First two moments of the reciprocal variables under uniform binary input:
/// mu = half the column sums of the factor, sigma = 1/2 per mode.
struct ReciprocalMoments {
  Vector mu_x;  // length N
  Vector mu_y;  // length M
  double sigma_x = 0.5;
  double sigma_y = 0.5;
};

ReciprocalMoments reciprocal_moments(const ReciprocalFrame& frame);

/// Standard kurtosis (m4 / m2^2) of the reciprocal variables under uniform
/// Bernoulli inputs, per mode with lambda above tolerance.
struct KurtosisScan {
  std::vector<Index> modes;  // active modes, ascending
  Vector kurtosis_y;
  Vector kurtosis_x;
  double mean_y = 0.0, sd_y = 0.0;
  double mean_x = 0.0, sd_x = 0.0;
};

KurtosisScan kurtosis_scan(const ReciprocalFrame& frame, std::size_t n_samples,
                           std::uint64_t seed);

}  // namespace rbmscope

#endif  // RBMSCOPE_SYMMETRY_HPP
