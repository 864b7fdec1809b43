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

#include "rbmscope/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "rbmscope/errors.hpp"
#include "rbmscope/parallel.hpp"

namespace rbmscope {

namespace {

constexpr double kOrthoTolerance = 1e-10;

/// In-place left multiplication target <- R * target for the planar rotation
/// R = I + (c-1)(ee^t + ff^t) + s(fe^t - ef^t); O(dim^2) per application.
void apply_planar_rotation(Matrix& target, const Vector& e, const Vector& f, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Eigen::RowVectorXd et = e.transpose() * target;
  const Eigen::RowVectorXd ft = f.transpose() * target;
  target.noalias() += e * ((c - 1.0) * et - s * ft);
  target.noalias() += f * ((c - 1.0) * ft + s * et);
}

/// Random orthonormal pair supported on the coordinates not in `blocked`.
std::pair<Vector, Vector> random_plane(Index dim, const std::vector<bool>& blocked, Rng& rng) {
  Index free_dims = 0;
  for (Index i = 0; i < dim; ++i) {
    if (!blocked[static_cast<std::size_t>(i)]) ++free_dims;
  }
  if (free_dims < 2) throw InvalidArgument("rotation plane needs two unprotected dimensions");

  Vector e = Vector::Zero(dim);
  Vector f = Vector::Zero(dim);
  while (true) {
    for (Index i = 0; i < dim; ++i) {
      if (!blocked[static_cast<std::size_t>(i)]) {
        e[i] = rng.normal();
        f[i] = rng.normal();
      }
    }
    const double en = e.norm();
    if (en < 1e-12) continue;
    e /= en;
    f -= e.dot(f) * e;
    const double fn = f.norm();
    if (fn < 1e-12) continue;
    f /= fn;
    return {e, f};
  }
}

}  // namespace

Matrix rotation_nd(Index dim, const Vector& plane_e, const Vector& plane_f, double angle) {
  if (plane_e.size() != dim || plane_f.size() != dim) {
    throw DimensionMismatch("plane vectors must match the rotation dimension");
  }
  if (std::abs(plane_e.norm() - 1.0) > kOrthoTolerance ||
      std::abs(plane_f.norm() - 1.0) > kOrthoTolerance ||
      std::abs(plane_e.dot(plane_f)) > kOrthoTolerance) {
    throw NotOrthonormal("plane vectors must be orthonormal to 1e-10");
  }
  Matrix r = Matrix::Identity(dim, dim);
  apply_planar_rotation(r, plane_e, plane_f, angle);
  return r;
}

Matrix random_rotation_burst(const RotationPlan& plan, Rng& rng) {
  if (plan.dim < 1) throw InvalidArgument("rotation dimension must be positive");
  if (plan.n_rotations < 0) throw InvalidArgument("rotation count must be non-negative");
  std::vector<bool> blocked(static_cast<std::size_t>(plan.dim), false);
  for (Index m : plan.protected_modes) {
    if (m < 0 || m >= plan.dim) throw IndexOutOfRange("protected mode outside dimension");
    blocked[static_cast<std::size_t>(m)] = true;
  }
  Matrix r = Matrix::Identity(plan.dim, plan.dim);
  for (int k = 0; k < plan.n_rotations; ++k) {
    const auto [e, f] = random_plane(plan.dim, blocked, rng);
    const double angle = plan.angle ? *plan.angle : 2.0 * std::numbers::pi * rng.uniform();
    apply_planar_rotation(r, e, f, angle);
  }
  return r;
}

Matrix rotate_frame(const ReciprocalFrame& frame, const Matrix& rotation) {
  if (rotation.rows() != frame.n_visible() || rotation.cols() != frame.n_visible()) {
    throw DimensionMismatch("rotation must be N x N");
  }
  const Index coupled = frame.n_coupled();
  const Matrix u_rot = rotation * frame.u * rotation.transpose();
  return u_rot.leftCols(coupled) * frame.lambdas.asDiagonal() *
         frame.v.leftCols(coupled).transpose();
}

double jensen_divergence(const Histogram& p, const Histogram& q) {
  if (p.bin_edges != q.bin_edges) throw BinMismatch("histograms use different bin edges");
  const double np = static_cast<double>(p.total());
  const double nq = static_cast<double>(q.total());
  if (np == 0.0 || nq == 0.0) throw InvalidArgument("histograms must be non-empty");
  double jsd = 0.0;
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    const double pi = static_cast<double>(p.counts[i]) / np;
    const double qi = static_cast<double>(q.counts[i]) / nq;
    const double mi = 0.5 * (pi + qi);
    if (pi > 0.0) jsd += 0.5 * pi * std::log(pi / mi);
    if (qi > 0.0) jsd += 0.5 * qi * std::log(qi / mi);
  }
  return jsd;
}

RotationPlan default_probe_plan(Index dim, double rotations_fraction) {
  RotationPlan plan;
  plan.dim = dim;
  plan.n_rotations = static_cast<int>(std::ceil(rotations_fraction * static_cast<double>(dim)));
  return plan;
}

namespace {

std::vector<double> matrix_entries(const Matrix& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

std::vector<double> pooled_edges(const std::vector<double>& a, const std::vector<double>& b,
                                 int n_bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : a) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (double x : b) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return uniform_edges(lo, hi, n_bins);
}

}  // namespace

SymmetryProbeResult rotation_symmetry_probe_detail(const RbmParams& params,
                                                   const RotationPlan& plan_visible,
                                                   const RotationPlan& plan_hidden, int n_bins,
                                                   Rng& rng) {
  if (plan_visible.dim != params.n_visible() || plan_hidden.dim != params.n_hidden()) {
    throw DimensionMismatch("rotation plans must be sized to N and M");
  }
  const ReciprocalFrame frame = decompose(params);
  const Matrix r_u = random_rotation_burst(plan_visible, rng);
  const Matrix r_v = random_rotation_burst(plan_hidden, rng);
  const Matrix u_rot = r_u * frame.u * r_u.transpose();
  const Matrix v_rot = r_v * frame.v * r_v.transpose();
  const Index coupled = frame.n_coupled();
  const Matrix w_rot = u_rot.leftCols(coupled) * frame.lambdas.asDiagonal() *
                       v_rot.leftCols(coupled).transpose();

  const auto w_entries = matrix_entries(params.w);
  const auto rot_entries = matrix_entries(w_rot);
  const auto edges = pooled_edges(w_entries, rot_entries, n_bins);
  SymmetryProbeResult result;
  result.original = make_histogram(w_entries, edges);
  result.rotated = make_histogram(rot_entries, edges);
  result.jsd = jensen_divergence(result.original, result.rotated);
  return result;
}

double rotation_symmetry_probe(const RbmParams& params, const RotationPlan& plan_visible,
                               const RotationPlan& plan_hidden, int n_bins, Rng& rng) {
  return rotation_symmetry_probe_detail(params, plan_visible, plan_hidden, n_bins, rng).jsd;
}

double self_resampling_baseline(const RbmParams& params, int n_bins, Rng& rng) {
  std::vector<double> entries = matrix_entries(params.w);
  if (entries.size() < 2) throw InvalidArgument("weight matrix too small to split");
  rng.shuffle(entries);
  const std::size_t half = entries.size() / 2;
  std::vector<double> first(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<double> second(entries.begin() + static_cast<std::ptrdiff_t>(half), entries.end());
  const auto edges = pooled_edges(first, second, n_bins);
  return jensen_divergence(make_histogram(first, edges), make_histogram(second, edges));
}

RotatedReconstruction hierarchical_rotation(const RbmParams& params, const Matrix& hidden_states,
                                            RotationExperiment mode, Rng& rng) {
  if (hidden_states.rows() != params.n_hidden()) {
    throw DimensionMismatch("hidden states must be M x n_samples");
  }
  const ReciprocalFrame frame = decompose(params);
  const Index n = frame.n_visible();
  const Index coupled = frame.n_coupled();

  Matrix rotation = Matrix::Identity(n, n);
  switch (mode) {
    case RotationExperiment::Identity:
      break;
    case RotationExperiment::Top2Pi: {
      if (coupled < 2) throw InvalidArgument("top-2 rotation needs two coupled modes");
      rotation = rotation_nd(n, frame.u.col(0), frame.u.col(1), std::numbers::pi);
      break;
    }
    case RotationExperiment::Top5ProtectedBurst: {
      constexpr Index kProtected = 5;
      constexpr int kRotations = 10;
      if (n < kProtected + 2) throw InvalidArgument("top-5 burst needs N >= 7");
      // Planes drawn in the span of the non-leading U columns, so the five
      // leading modes always lie inside the fixed subspace.
      std::vector<bool> blocked(static_cast<std::size_t>(n), false);
      for (Index i = 0; i < kProtected; ++i) blocked[static_cast<std::size_t>(i)] = true;
      for (int k = 0; k < kRotations; ++k) {
        const auto [g1, g2] = random_plane(n, blocked, rng);
        const Vector e = frame.u * g1;
        const Vector f = frame.u * g2;
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        apply_planar_rotation(rotation, e, f, angle);
      }
      break;
    }
  }

  const Matrix u_rot = rotation * frame.u * rotation.transpose();
  const Matrix w_before = frame.u.leftCols(coupled) * frame.lambdas.asDiagonal() *
                          frame.v.leftCols(coupled).transpose();
  const Matrix w_after = u_rot.leftCols(coupled) * frame.lambdas.asDiagonal() *
                         frame.v.leftCols(coupled).transpose();

  RotatedReconstruction out;
  out.before = (w_before * hidden_states).colwise() + params.a;
  out.after = (w_after * hidden_states).colwise() + params.a;
  for (Index j = 0; j < out.before.cols(); ++j) {
    for (Index i = 0; i < out.before.rows(); ++i) {
      out.before(i, j) = sigmoid(out.before(i, j));
      out.after(i, j) = sigmoid(out.after(i, j));
    }
  }
  return out;
}

ReciprocalMoments reciprocal_moments(const ReciprocalFrame& frame) {
  ReciprocalMoments m;
  m.mu_x = 0.5 * frame.u.colwise().sum().transpose();
  m.mu_y = 0.5 * frame.v.colwise().sum().transpose();
  return m;
}

KurtosisScan kurtosis_scan(const ReciprocalFrame& frame, std::size_t n_samples,
                           std::uint64_t seed) {
  if (n_samples < 10000) throw InvalidArgument("kurtosis scan needs at least 1e4 samples");

  KurtosisScan scan;
  for (Index i = 0; i < frame.n_coupled(); ++i) {
    if (frame.mode_active(i)) scan.modes.push_back(i);
  }
  const Index r = static_cast<Index>(scan.modes.size());
  if (r == 0) return scan;

  // Projector rows restricted to the active modes.
  Matrix proj_y(r, frame.n_hidden());
  Matrix proj_x(r, frame.n_visible());
  for (Index k = 0; k < r; ++k) {
    proj_y.row(k) = frame.v.col(scan.modes[static_cast<std::size_t>(k)]).transpose();
    proj_x.row(k) = frame.u.col(scan.modes[static_cast<std::size_t>(k)]).transpose();
  }

  auto accumulate = [&](const Matrix& proj, Index input_dim, std::uint64_t tag, Vector& kurt) {
    constexpr std::size_t kBlock = 1024;
    const std::size_t n_blocks = (n_samples + kBlock - 1) / kBlock;
    // Per-block raw moment partials, folded in block order afterwards so the
    // result is independent of the worker count.
    std::vector<Matrix> partials(n_blocks);
    parallel_for(n_blocks, [&](std::size_t blk) {
      const std::size_t begin = blk * kBlock;
      const std::size_t count = std::min(kBlock, n_samples - begin);
      Matrix block(input_dim, static_cast<Index>(count));
      for (std::size_t s = 0; s < count; ++s) {
        Rng sample_rng = Rng::stream(seed, {tag, begin + s});
        for (Index i = 0; i < input_dim; ++i) {
          block(i, static_cast<Index>(s)) = sample_rng.bit();
        }
      }
      const Matrix projected = proj * block;
      Matrix sums = Matrix::Zero(r, 4);
      for (Index c = 0; c < projected.cols(); ++c) {
        for (Index k = 0; k < r; ++k) {
          const double z = projected(k, c);
          const double z2 = z * z;
          sums(k, 0) += z;
          sums(k, 1) += z2;
          sums(k, 2) += z2 * z;
          sums(k, 3) += z2 * z2;
        }
      }
      partials[blk] = std::move(sums);
    });
    Matrix sums = Matrix::Zero(r, 4);
    for (const auto& p : partials) sums += p;
    kurt.resize(r);
    const double n = static_cast<double>(n_samples);
    for (Index k = 0; k < r; ++k) {
      const double m1 = sums(k, 0) / n;
      const double m2 = sums(k, 1) / n - m1 * m1;
      const double m4 = sums(k, 3) / n - 4.0 * m1 * sums(k, 2) / n +
                        6.0 * m1 * m1 * sums(k, 1) / n - 3.0 * m1 * m1 * m1 * m1;
      kurt[k] = m4 / (m2 * m2);
    }
  };

  accumulate(proj_y, frame.n_hidden(), 0x6b757274795fULL, scan.kurtosis_y);
  accumulate(proj_x, frame.n_visible(), 0x6b757274785fULL, scan.kurtosis_x);

  auto mean_sd = [&](const Vector& k, double& mean, double& sd) {
    mean = k.mean();
    const double var =
        (k.array() - mean).square().sum() / std::max<double>(1.0, static_cast<double>(k.size() - 1));
    sd = std::sqrt(var);
  };
  mean_sd(scan.kurtosis_y, scan.mean_y, scan.sd_y);
  mean_sd(scan.kurtosis_x, scan.mean_x, scan.sd_x);
  return scan;
}

}  // namespace rbmscope
