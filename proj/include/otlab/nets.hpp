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

#ifndef OTLAB_NETS_HPP
#define OTLAB_NETS_HPP

#include <Eigen/Core>
#include <random>
#include <utility>
#include <vector>

namespace otlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Fully connected layer over column-major batches (columns are samples).
// Besides the usual forward/backward it carries a tangent (JVP) pass and a
// dual backward pass so second-order terms like grad-penalty gradients can
// be computed exactly: run forward, then forward_jvp with an input tangent,
// then backward_dual; the tangent parameter gradients accumulate into
// gW / gb.
struct Linear {
  Mat W;
  Vec b;
  Mat gW;
  Vec gb;
  Mat X;     // cached forward input
  Mat Xdot;  // cached input tangent

  void init(int in, int out, std::mt19937_64& rng);
  void zero_grad();
  long param_count() const { return W.size() + b.size(); }

  Mat forward(const Mat& x);
  // Returns dX; accumulates gW/gb when acc is set.
  Mat backward(const Mat& dY, bool acc);
  Mat forward_jvp(const Mat& xdot);
  // Returns (dX, dXdot); accumulates the *tangent* parameter gradients.
  std::pair<Mat, Mat> backward_dual(const Mat& dY, const Mat& dYdot);
};

Mat silu(const Mat& u);
Mat silu_deriv(const Mat& u);
Mat silu_second(const Mat& u);

// Pre-activation residual block: h + l2(silu(l1(silu(h)))).
struct ResidualBlock {
  Linear l1, l2;
  Mat H, Hdot;    // block input and its tangent
  Mat U1, U1dot;  // pre-activation of the second silu

  void init(int width, std::mt19937_64& rng);
  Mat forward(const Mat& h);
  Mat backward(const Mat& d, bool acc);
  Mat forward_jvp(const Mat& hdot);
  std::pair<Mat, Mat> backward_dual(const Mat& d, const Mat& ddot);
};

// Scalar potential v(y): lift -> residual blocks -> 2-layer head.
struct PotentialNet {
  int width = 128;
  int n_blocks = 3;
  Linear lift, h1, h2;
  std::vector<ResidualBlock> blocks;
  Mat U, Udot;  // head pre-activation

  PotentialNet() = default;
  PotentialNet(int width, int n_blocks, std::mt19937_64& rng);

  Mat forward(const Mat& y);  // 1 x B
  Mat backward(const Mat& dOut, bool acc);
  Mat forward_jvp(const Mat& ydot);
  void backward_dual(const Mat& dOut, const Mat& dOutdot);

  // Per-sample input gradients of the most recent forward pass.
  Mat input_grad(int batch);

  std::vector<Linear*> linears();
};

// Stochastic transport map T(x, z): a residual trunk on x plus a two-layer
// noise embedding, summed and decoded by a 2-layer head.
struct GeneratorNet {
  int width = 128;
  int n_blocks = 3;
  int z_dim = 2;
  Linear z1, z2, lift, h1, h2;
  std::vector<ResidualBlock> blocks;
  Mat Uz;  // z-branch pre-activation
  Mat U;   // head pre-activation

  GeneratorNet() = default;
  GeneratorNet(int width, int n_blocks, int z_dim, std::mt19937_64& rng);

  Mat forward(const Mat& x, const Mat& z);  // 2 x B
  void backward(const Mat& dOut, bool acc);

  std::vector<Linear*> linears();
};

// Flat parameter plumbing shared by the optimizer, checkpoints and tests.
long param_count(const std::vector<Linear*>& ls);
Vec get_params(const std::vector<Linear*>& ls);
void set_params(const std::vector<Linear*>& ls, const Vec& flat);
Vec get_grads(const std::vector<Linear*>& ls);
void zero_grads(const std::vector<Linear*>& ls);
void clip_params(const std::vector<Linear*>& ls, double bound);

// Parameter sets of one experiment: the generator and the potential.
struct NetworkParams {
  GeneratorNet generator;
  PotentialNet potential;

  NetworkParams() = default;
  NetworkParams(int width, int n_blocks, int z_dim, std::mt19937_64& rng)
      : generator(width, n_blocks, z_dim, rng),
        potential(width, n_blocks, rng) {}
};

// Clamps every potential parameter to [-bound, bound]; generator untouched.
NetworkParams weight_clip(NetworkParams params, double bound);

}  // namespace otlab

#endif  // OTLAB_NETS_HPP
