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

#include "rbmscope/rbm.hpp"

#include "rbmscope/errors.hpp"

namespace rbmscope {

namespace detail {

void check_dims(const RbmParams& params, const Vector& v, const Vector& h) {
  if (params.w.rows() != params.n_visible() || params.w.cols() != params.n_hidden()) {
    throw DimensionMismatch("coupling matrix shape does not match biases");
  }
  if (v.size() != params.n_visible()) throw DimensionMismatch("visible vector length != N");
  if (h.size() != params.n_hidden()) throw DimensionMismatch("hidden vector length != M");
}

}  // namespace detail

RbmParams init_params(Index n_visible, Index n_hidden, double sigma, Rng& rng) {
  if (n_visible < 1 || n_hidden < 1) throw InvalidArgument("layer sizes must be positive");
  if (sigma < 0.0) throw InvalidArgument("init sigma must be non-negative");
  RbmParams p;
  p.a = Vector::Zero(n_visible);
  p.b = Vector::Zero(n_hidden);
  p.w = Matrix(n_visible, n_hidden);
  for (Index j = 0; j < n_hidden; ++j) {
    for (Index i = 0; i < n_visible; ++i) p.w(i, j) = rng.normal(0.0, sigma);
  }
  return p;
}

double energy(const RbmParams& params, const Vector& v, const Vector& h) {
  detail::check_dims(params, v, h);
  return -params.a.dot(v) - params.b.dot(h) - v.dot(params.w * h);
}

Vector hidden_field(const RbmParams& params, const Vector& v) {
  if (v.size() != params.w.rows()) throw DimensionMismatch("visible vector length != N");
  return params.w.transpose() * v + params.b;
}

Vector visible_field(const RbmParams& params, const Vector& h) {
  if (h.size() != params.w.cols()) throw DimensionMismatch("hidden vector length != M");
  return params.w * h + params.a;
}

namespace {

Vector sample_bernoulli_fields(const Vector& fields, Rng& rng) {
  Vector out(fields.size());
  for (Index i = 0; i < fields.size(); ++i) {
    out[i] = rng.bernoulli(sigmoid(fields[i])) ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace

Vector sample_hidden(const RbmParams& params, const Vector& v, Rng& rng) {
  return sample_bernoulli_fields(hidden_field(params, v), rng);
}

Vector sample_visible(const RbmParams& params, const Vector& h, Rng& rng) {
  return sample_bernoulli_fields(visible_field(params, h), rng);
}

ChainState block_gibbs(const RbmParams& params, ChainState state, int k_sweeps, Rng& rng) {
  if (k_sweeps < 1) throw InvalidArgument("block Gibbs needs at least one sweep");
  detail::check_dims(params, state.v, state.h);
  for (int k = 0; k < k_sweeps; ++k) {
    state.h = sample_hidden(params, state.v, rng);
    state.v = sample_visible(params, state.h, rng);
  }
  state.steps_taken += static_cast<std::uint64_t>(k_sweeps);
  return state;
}

double free_energy_visible(const RbmParams& params, const Vector& v) {
  const Vector c = hidden_field(params, v);
  double f = -params.a.dot(v);
  for (Index j = 0; j < c.size(); ++j) f -= softplus(c[j]);
  return f;
}

}  // namespace rbmscope
