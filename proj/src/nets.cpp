// Copyright 2026 The otlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "otlab/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace otlab {

namespace {
// Vectorized stable sigmoid: exp(min(x,0)) / (1 + exp(-|x|)) equals
// 1/(1+e^-x) for x >= 0 and e^x/(1+e^x) below, with no branch and both
// exponentials safe. Keeps Eigen's SIMD exp in play, which is the
// difference between the activations and the GEMMs dominating a pass.
Eigen::ArrayXXd sigmoid_arr(const Mat& u) {
  return u.array().min(0.0).exp() / (1.0 + (-u.array().abs()).exp());
}
}  // namespace

Mat silu(const Mat& u) { return u.array() * sigmoid_arr(u); }

Mat silu_deriv(const Mat& u) {
  const Eigen::ArrayXXd s = sigmoid_arr(u);
  return s * (1.0 + u.array() * (1.0 - s));
}

Mat silu_second(const Mat& u) {
  const Eigen::ArrayXXd s = sigmoid_arr(u);
  return s * (1.0 - s) * (2.0 + u.array() * (1.0 - 2.0 * s));
}

void Linear::init(int in, int out, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> u(-bound, bound);
  W.resize(out, in);
  b.resize(out);
  for (int r = 0; r < out; ++r) {
    for (int c = 0; c < in; ++c) W(r, c) = u(rng);
  }
  for (int r = 0; r < out; ++r) b[r] = u(rng);
  gW = Mat::Zero(out, in);
  gb = Vec::Zero(out);
}

void Linear::zero_grad() {
  gW.setZero();
  gb.setZero();
}

Mat Linear::forward(const Mat& x) {
  X = x;
  return (W * x).colwise() + b;
}

Mat Linear::backward(const Mat& dY, bool acc) {
  if (acc) {
    gW.noalias() += dY * X.transpose();
    gb.noalias() += dY.rowwise().sum();
  }
  return W.transpose() * dY;
}

Mat Linear::forward_jvp(const Mat& xdot) {
  Xdot = xdot;
  return W * xdot;
}

std::pair<Mat, Mat> Linear::backward_dual(const Mat& dY, const Mat& dYdot) {
  gW.noalias() += dYdot * X.transpose() + dY * Xdot.transpose();
  gb.noalias() += dYdot.rowwise().sum();
  return {W.transpose() * dY, W.transpose() * dYdot};
}

void ResidualBlock::init(int width, std::mt19937_64& rng) {
  l1.init(width, width, rng);
  l2.init(width, width, rng);
}

Mat ResidualBlock::forward(const Mat& h) {
  H = h;
  U1 = l1.forward(silu(h));
  return h + l2.forward(silu(U1));
}

Mat ResidualBlock::backward(const Mat& d, bool acc) {
  const Mat dS1 = l2.backward(d, acc);
  const Mat dU1 = silu_deriv(U1).cwiseProduct(dS1);
  const Mat dS0 = l1.backward(dU1, acc);
  return d + silu_deriv(H).cwiseProduct(dS0);
}

Mat ResidualBlock::forward_jvp(const Mat& hdot) {
  Hdot = hdot;
  U1dot = l1.forward_jvp(silu_deriv(H).cwiseProduct(hdot));
  return hdot + l2.forward_jvp(silu_deriv(U1).cwiseProduct(U1dot));
}

std::pair<Mat, Mat> ResidualBlock::backward_dual(const Mat& d,
                                                 const Mat& ddot) {
  const auto [dS1, dS1dot] = l2.backward_dual(d, ddot);
  const Mat sd1 = silu_deriv(U1);
  const Mat dU1 = sd1.cwiseProduct(dS1);
  const Mat dU1dot = sd1.cwiseProduct(dS1dot) +
                     silu_second(U1).cwiseProduct(U1dot).cwiseProduct(dS1);
  const auto [dS0, dS0dot] = l1.backward_dual(dU1, dU1dot);
  const Mat sd0 = silu_deriv(H);
  const Mat dH = sd0.cwiseProduct(dS0);
  const Mat dHdot = sd0.cwiseProduct(dS0dot) +
                    silu_second(H).cwiseProduct(Hdot).cwiseProduct(dS0);
  return {d + dH, ddot + dHdot};
}

PotentialNet::PotentialNet(int width_, int n_blocks_, std::mt19937_64& rng)
    : width(width_), n_blocks(n_blocks_) {
  lift.init(2, width, rng);
  blocks.resize(n_blocks);
  for (auto& blk : blocks) blk.init(width, rng);
  h1.init(width, width, rng);
  h2.init(width, 1, rng);
}

Mat PotentialNet::forward(const Mat& y) {
  Mat a = lift.forward(y);
  for (auto& blk : blocks) a = blk.forward(a);
  U = h1.forward(a);
  return h2.forward(silu(U));
}

Mat PotentialNet::backward(const Mat& dOut, bool acc) {
  const Mat dS = h2.backward(dOut, acc);
  Mat d = h1.backward(silu_deriv(U).cwiseProduct(dS), acc);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    d = it->backward(d, acc);
  }
  return lift.backward(d, acc);
}

Mat PotentialNet::forward_jvp(const Mat& ydot) {
  Mat adot = lift.forward_jvp(ydot);
  for (auto& blk : blocks) adot = blk.forward_jvp(adot);
  Udot = h1.forward_jvp(adot);
  return h2.forward_jvp(silu_deriv(U).cwiseProduct(Udot));
}

void PotentialNet::backward_dual(const Mat& dOut, const Mat& dOutdot) {
  auto [dS, dSdot] = h2.backward_dual(dOut, dOutdot);
  const Mat sd = silu_deriv(U);
  const Mat dU = sd.cwiseProduct(dS);
  const Mat dUdot = sd.cwiseProduct(dSdot) +
                    silu_second(U).cwiseProduct(Udot).cwiseProduct(dS);
  auto [d, ddot] = h1.backward_dual(dU, dUdot);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    std::tie(d, ddot) = it->backward_dual(d, ddot);
  }
  lift.backward_dual(d, ddot);
}

Mat PotentialNet::input_grad(int batch) {
  return backward(Mat::Ones(1, batch), false);
}

std::vector<Linear*> PotentialNet::linears() {
  std::vector<Linear*> ls{&lift};
  for (auto& blk : blocks) {
    ls.push_back(&blk.l1);
    ls.push_back(&blk.l2);
  }
  ls.push_back(&h1);
  ls.push_back(&h2);
  return ls;
}

GeneratorNet::GeneratorNet(int width_, int n_blocks_, int z_dim_,
                           std::mt19937_64& rng)
    : width(width_), n_blocks(n_blocks_), z_dim(z_dim_) {
  z1.init(z_dim, width, rng);
  z2.init(width, width, rng);
  lift.init(2, width, rng);
  blocks.resize(n_blocks);
  for (auto& blk : blocks) blk.init(width, rng);
  h1.init(width, width, rng);
  h2.init(width, 2, rng);
}

Mat GeneratorNet::forward(const Mat& x, const Mat& z) {
  if (x.cols() != z.cols()) {
    throw std::invalid_argument("GeneratorNet: x/z batch size mismatch");
  }
  Uz = z1.forward(z);
  const Mat ez = z2.forward(silu(Uz));
  Mat a = lift.forward(x);
  for (auto& blk : blocks) a = blk.forward(a);
  U = h1.forward(a + ez);
  return h2.forward(silu(U));
}

void GeneratorNet::backward(const Mat& dOut, bool acc) {
  const Mat dS = h2.backward(dOut, acc);
  const Mat dSum = h1.backward(silu_deriv(U).cwiseProduct(dS), acc);
  // x-trunk
  Mat d = dSum;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    d = it->backward(d, acc);
  }
  lift.backward(d, acc);
  // z-branch
  const Mat dSz = z2.backward(dSum, acc);
  z1.backward(silu_deriv(Uz).cwiseProduct(dSz), acc);
}

std::vector<Linear*> GeneratorNet::linears() {
  std::vector<Linear*> ls{&z1, &z2, &lift};
  for (auto& blk : blocks) {
    ls.push_back(&blk.l1);
    ls.push_back(&blk.l2);
  }
  ls.push_back(&h1);
  ls.push_back(&h2);
  return ls;
}

long param_count(const std::vector<Linear*>& ls) {
  long n = 0;
  for (const Linear* l : ls) n += l->param_count();
  return n;
}

Vec get_params(const std::vector<Linear*>& ls) {
  Vec flat(param_count(ls));
  long at = 0;
  for (const Linear* l : ls) {
    flat.segment(at, l->W.size()) =
        Eigen::Map<const Vec>(l->W.data(), l->W.size());
    at += l->W.size();
    flat.segment(at, l->b.size()) = l->b;
    at += l->b.size();
  }
  return flat;
}

void set_params(const std::vector<Linear*>& ls, const Vec& flat) {
  if (flat.size() != param_count(ls)) {
    throw std::invalid_argument("set_params: size mismatch");
  }
  long at = 0;
  for (Linear* l : ls) {
    Eigen::Map<Vec>(l->W.data(), l->W.size()) =
        flat.segment(at, l->W.size());
    at += l->W.size();
    l->b = flat.segment(at, l->b.size());
    at += l->b.size();
  }
}

Vec get_grads(const std::vector<Linear*>& ls) {
  Vec flat(param_count(ls));
  long at = 0;
  for (const Linear* l : ls) {
    flat.segment(at, l->gW.size()) =
        Eigen::Map<const Vec>(l->gW.data(), l->gW.size());
    at += l->gW.size();
    flat.segment(at, l->gb.size()) = l->gb;
    at += l->gb.size();
  }
  return flat;
}

void zero_grads(const std::vector<Linear*>& ls) {
  for (Linear* l : ls) l->zero_grad();
}

void clip_params(const std::vector<Linear*>& ls, double bound) {
  for (Linear* l : ls) {
    l->W = l->W.cwiseMax(-bound).cwiseMin(bound);
    l->b = l->b.cwiseMax(-bound).cwiseMin(bound);
  }
}

NetworkParams weight_clip(NetworkParams params, double bound) {
  if (!(bound > 0.0)) {
    throw std::invalid_argument("weight_clip: bound must be positive");
  }
  clip_params(params.potential.linears(), bound);
  return params;
}

}  // namespace otlab
