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

#ifndef RBMSCOPE_RBM_HPP
#define RBMSCOPE_RBM_HPP

#include <cstdint>

#include "rbmscope/numeric.hpp"
#include "rbmscope/rng.hpp"

namespace rbmscope {

/// Binary-binary RBM parameters. W couples visible row i to hidden column j;
/// there are no couplings inside a layer.
struct RbmParams {
  Vector a;  // visible biases, length N
  Vector b;  // hidden biases, length M
  Matrix w;  // couplings, N x M

  Index n_visible() const { return a.size(); }
  Index n_hidden() const { return b.size(); }
};

/// One block-Gibbs Markov chain.
struct ChainState {
  Vector v;  // {0,1}^N
  Vector h;  // {0,1}^M
  std::uint64_t steps_taken = 0;
};

/// Gaussian(0, sigma^2) couplings, zero biases.
RbmParams init_params(Index n_visible, Index n_hidden, double sigma, Rng& rng);

/// E(v,h) = -a.v - b.h - v^T W h
double energy(const RbmParams& params, const Vector& v, const Vector& h);

/// C_j(v) = sum_i v_i W_ij + b_j; q(h_j = 1 | v) = sigmoid(C_j).
Vector hidden_field(const RbmParams& params, const Vector& v);

/// D_i(h) = sum_j W_ij h_j + a_i; p(v_i = 1 | h) = sigmoid(D_i).
Vector visible_field(const RbmParams& params, const Vector& h);

Vector sample_hidden(const RbmParams& params, const Vector& v, Rng& rng);
Vector sample_visible(const RbmParams& params, const Vector& h, Rng& rng);

/// K full sweeps, each sampling h from q(h|v) and then v from p(v|h).
ChainState block_gibbs(const RbmParams& params, ChainState state, int k_sweeps, Rng& rng);

/// -a.v - sum_j ln(1 + exp C_j(v)); p(v) is proportional to exp(-F(v)).
double free_energy_visible(const RbmParams& params, const Vector& v);

namespace detail {
void check_dims(const RbmParams& params, const Vector& v, const Vector& h);
}

}  // namespace rbmscope

#endif  // RBMSCOPE_RBM_HPP
