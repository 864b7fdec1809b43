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

#include "rbmscope/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rbmscope/errors.hpp"
#include "rbmscope/io.hpp"

namespace rbmscope {

namespace {

constexpr double kRelativeTolerance = 1e-10;

bool column_less(const Matrix& m, Index a, Index b) {
  for (Index r = 0; r < m.rows(); ++r) {
    if (m(r, a) < m(r, b)) return true;
    if (m(r, a) > m(r, b)) return false;
  }
  return false;
}

/// Flip the column so its largest-magnitude entry is positive. Returns the
/// applied sign so the partner factor can be flipped to match.
double fix_column_sign(Matrix& m, Index col) {
  Index arg = 0;
  double best = -1.0;
  for (Index r = 0; r < m.rows(); ++r) {
    const double mag = std::abs(m(r, col));
    if (mag > best) {
      best = mag;
      arg = r;
    }
  }
  if (m(arg, col) < 0.0) {
    m.col(col) = -m.col(col);
    return -1.0;
  }
  return 1.0;
}

}  // namespace

ReciprocalFrame decompose(const RbmParams& params) {
  if (!params.w.allFinite()) throw InvalidArgument("coupling matrix has non-finite entries");
  if (params.w.rows() != params.n_visible() || params.w.cols() != params.n_hidden()) {
    throw DimensionMismatch("coupling matrix shape does not match biases");
  }

  Eigen::BDCSVD<Matrix> svd(params.w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");

  ReciprocalFrame frame;
  frame.u = svd.matrixU();
  frame.v = svd.matrixV();
  frame.lambdas = svd.singularValues();
  const Index coupled = frame.lambdas.size();

  // Stabilize exact ties by the lexicographic order of the U columns.
  for (Index i = 0; i + 1 < coupled; ++i) {
    for (Index j = i + 1; j > 0 && frame.lambdas[j] == frame.lambdas[j - 1] &&
                          column_less(frame.u, j, j - 1);
         --j) {
      frame.u.col(j).swap(frame.u.col(j - 1));
      frame.v.col(j).swap(frame.v.col(j - 1));
    }
  }

  // Reproducible gauge: pair flips for coupled modes, free flips on the tail.
  for (Index i = 0; i < coupled; ++i) {
    const double sign = fix_column_sign(frame.u, i);
    if (sign < 0.0) frame.v.col(i) = -frame.v.col(i);
  }
  for (Index i = coupled; i < frame.u.cols(); ++i) fix_column_sign(frame.u, i);
  for (Index i = coupled; i < frame.v.cols(); ++i) fix_column_sign(frame.v, i);

  frame.a0 = frame.u.transpose() * params.a;
  frame.b0 = frame.v.transpose() * params.b;
  frame.lambda_tolerance = coupled > 0 ? kRelativeTolerance * frame.lambdas[0] : 0.0;

  for (Index i = 0; i < coupled; ++i) {
    if (frame.lambdas[i] > frame.lambda_tolerance) {
      const double lambda = frame.lambdas[i];
      frame.saddles.push_back(ModeSaddle{i, -frame.b0[i] / lambda, -frame.a0[i] / lambda,
                                         frame.a0[i] * frame.b0[i] / lambda});
    }
  }
  return frame;
}

Vector project_visible(const ReciprocalFrame& frame, const Vector& v) {
  if (v.size() != frame.n_visible()) throw DimensionMismatch("visible vector length != N");
  return frame.u.transpose() * v;
}

Vector project_hidden(const ReciprocalFrame& frame, const Vector& h) {
  if (h.size() != frame.n_hidden()) throw DimensionMismatch("hidden vector length != M");
  return frame.v.transpose() * h;
}

double mode_energy(const ReciprocalFrame& frame, Index mode, double x, double y) {
  if (mode < 0 || mode >= frame.n_modes()) throw IndexOutOfRange("mode index out of range");
  if (mode < frame.n_coupled()) {
    return -frame.a0[mode] * x - frame.b0[mode] * y - frame.lambdas[mode] * x * y;
  }
  // Tail modes live on the longer side only.
  if (frame.n_visible() >= frame.n_hidden()) return -frame.a0[mode] * x;
  return -frame.b0[mode] * y;
}

ModeSaddle saddle_point(const ReciprocalFrame& frame, Index mode) {
  if (mode < 0 || mode >= frame.n_modes()) throw IndexOutOfRange("mode index out of range");
  if (!frame.mode_active(mode)) {
    throw DegenerateMode("saddle point undefined for a zero singular value");
  }
  const double lambda = frame.lambdas[mode];
  return ModeSaddle{mode, -frame.b0[mode] / lambda, -frame.a0[mode] / lambda,
                    frame.a0[mode] * frame.b0[mode] / lambda};
}

std::pair<double, double> to_uw(const ReciprocalFrame& frame, Index mode, double x, double y) {
  const ModeSaddle s = saddle_point(frame, mode);
  const double dx = x - s.x0;
  const double dy = y - s.y0;
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  return {(dx + dy) * inv_sqrt2, (-dx + dy) * inv_sqrt2};
}

std::pair<double, double> from_uw(const ReciprocalFrame& frame, Index mode, double u, double w) {
  const ModeSaddle s = saddle_point(frame, mode);
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  return {s.x0 + (u - w) * inv_sqrt2, s.y0 + (u + w) * inv_sqrt2};
}

MpLaw make_mp_law(Index n, Index m, double sigma) {
  if (n < 1 || m < 1) throw InvalidArgument("layer sizes must be positive");
  if (sigma < 0.0) throw InvalidArgument("sigma must be non-negative");
  MpLaw law;
  law.sigma = sigma;
  law.n = n;
  law.m = m;
  const double q = static_cast<double>(std::min(n, m)) * sigma * sigma;
  const double root = std::sqrt(static_cast<double>(std::max(n, m))) * sigma;
  law.lambda_plus = root + std::sqrt(q);
  law.lambda_minus = root - std::sqrt(q);
  law.lambda_peak = sigma * std::sqrt(static_cast<double>(std::abs(n - m)));
  return law;
}

double mp_density(const MpLaw& law, double lambda) {
  if (!(lambda > law.lambda_minus) || !(lambda < law.lambda_plus)) return 0.0;
  const double q = static_cast<double>(std::min(law.n, law.m)) * law.sigma * law.sigma;
  const double p2 = law.lambda_plus * law.lambda_plus;
  const double m2 = law.lambda_minus * law.lambda_minus;
  const double l2 = lambda * lambda;
  return std::sqrt((p2 - l2) * (l2 - m2)) / (std::numbers::pi * q * lambda);
}

Vector singular_values(const Matrix& w) {
  const bool tall = w.rows() >= w.cols();
  const Matrix gram = tall ? Matrix(w.transpose() * w) : Matrix(w * w.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  Vector values = eig.eigenvalues();  // ascending
  Vector out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    out[i] = std::sqrt(std::max(0.0, values[values.size() - 1 - i]));
  }
  return out;
}

SpectralReport spectrum_report(const ReciprocalFrame& frame, const MpLaw& law,
                               int histogram_bins) {
  SpectralReport report;
  report.lambdas = frame.lambdas;
  report.law = law;
  report.saddles = frame.saddles;
  report.a0 = frame.a0;
  report.b0 = frame.b0;
  report.n_visible = frame.n_visible();
  report.n_hidden = frame.n_hidden();

  constexpr int kCurveSamples = 200;
  for (int i = 0; i <= kCurveSamples; ++i) {
    const double lambda = law.lambda_minus + (law.lambda_plus - law.lambda_minus) *
                                                 static_cast<double>(i) /
                                                 static_cast<double>(kCurveSamples);
    report.mp_grid.push_back(lambda);
    report.mp_values.push_back(mp_density(law, lambda));
  }

  std::vector<double> active;
  for (Index i = 0; i < frame.n_coupled(); ++i) {
    if (frame.mode_active(i)) active.push_back(frame.lambdas[i]);
  }
  if (!active.empty()) {
    const auto [lo, hi] = std::minmax_element(active.begin(), active.end());
    double low = *lo, high = *hi;
    if (!(high > low)) {  // all equal; widen so the histogram is well formed
      low -= 0.5;
      high += 0.5;
    }
    report.histogram = make_histogram(active, uniform_edges(low, high, histogram_bins));
  }
  return report;
}

std::string report_to_csv(const SpectralReport& report) {
  const Index n_modes = std::max(report.n_visible, report.n_hidden);
  const Index coupled = report.lambdas.size();
  std::vector<const ModeSaddle*> saddle_of(static_cast<std::size_t>(coupled), nullptr);
  for (const auto& s : report.saddles) saddle_of[static_cast<std::size_t>(s.mode)] = &s;

  std::ostringstream out;
  out << "mode,lambda,a0,b0,x0,y0,e_saddle\n";
  for (Index i = 0; i < n_modes; ++i) {
    out << (i + 1) << ',';
    out << (i < coupled ? fmt_double(report.lambdas[i]) : std::string{}) << ',';
    out << (i < report.a0.size() ? fmt_double(report.a0[i]) : std::string{}) << ',';
    out << (i < report.b0.size() ? fmt_double(report.b0[i]) : std::string{}) << ',';
    const ModeSaddle* s = i < coupled ? saddle_of[static_cast<std::size_t>(i)] : nullptr;
    if (s != nullptr) {
      out << fmt_double(s->x0) << ',' << fmt_double(s->y0) << ',' << fmt_double(s->energy);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string report_to_json(const SpectralReport& report) {
  nlohmann::ordered_json j;
  j["n_visible"] = report.n_visible;
  j["n_hidden"] = report.n_hidden;
  j["lambdas"] = std::vector<double>(report.lambdas.data(),
                                     report.lambdas.data() + report.lambdas.size());
  j["mp"] = {{"sigma", report.law.sigma},
             {"lambda_minus", report.law.lambda_minus},
             {"lambda_plus", report.law.lambda_plus},
             {"lambda_peak", report.law.lambda_peak},
             {"grid", report.mp_grid},
             {"density", report.mp_values}};
  j["histogram"] = {{"edges", report.histogram.bin_edges}, {"counts", report.histogram.counts}};
  nlohmann::ordered_json saddles = nlohmann::ordered_json::array();
  for (const auto& s : report.saddles) {
    saddles.push_back({{"mode", s.mode + 1}, {"x0", s.x0}, {"y0", s.y0}, {"energy", s.energy}});
  }
  j["saddles"] = saddles;
  return j.dump(2) + "\n";
}

}  // namespace rbmscope
