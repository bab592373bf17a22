// Copyright 2026 The dilqr Authors
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

// Time-varying LQR on perturbations around a nominal trajectory:
//
//   min  sum_{t<=T} 1/2 dx_t' Qxx_t dx_t + qx_t' dx_t
//      + sum_{t<T}  1/2 du_t' Quu_t du_t + qu_t' du_t
//   s.t. dx_{t+1} = A_t dx_t + B_t du_t,  dx_0 = 0
//
// Dimensions are dynamic so the same recursion serves the 4-state per-agent
// subproblem and the stacked 4N-state centralized baseline.

#pragma once

#include "dilqr/cost.hpp"
#include "dilqr/dynamics.hpp"
#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace dilqr {

struct LqrCosts {
  std::vector<Eigen::MatrixXd> Qxx;  // T + 1, last entry is terminal
  std::vector<Eigen::VectorXd> qx;   // T + 1
  std::vector<Eigen::MatrixXd> Quu;  // T
  std::vector<Eigen::VectorXd> qu;   // T

  int horizon() const { return static_cast<int>(Quu.size()); }
};

// Per-agent subproblem costs: host quadratics plus the ADMM proximal terms.
using AugmentedStageCosts = LqrCosts;

struct LqrDynamics {
  std::vector<Eigen::MatrixXd> A;  // T
  std::vector<Eigen::MatrixXd> B;  // T
};

LqrDynamics to_lqr_dynamics(const LinearizedDynamics& lin);

struct GainSchedule {
  std::vector<Eigen::VectorXd> k;  // feedforward, T
  std::vector<Eigen::MatrixXd> K;  // feedback, T
  double regularization = 0.0;     // Levenberg term that was finally used
};

struct PerturbationTrajectory {
  std::vector<Eigen::VectorXd> dx;  // T + 1, dx[0] = 0
  std::vector<Eigen::VectorXd> du;  // T
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Scales both quadratic additions by 1 / (sigma + 2 rho d_i): expanding
// ||J dX + r||^2 / (2 (sigma + 2 rho d_i)) stage-wise gives
//   1/2 dx' (J'J / c) dx + dx' J' r / c  and  1/2 du' (I / c) du + du' r~ / c.
// `r` is the full dual-dimension vector of the calling agent.
AugmentedStageCosts build_augmented_costs(const StageQuadratics& host,
                                          const CouplingModel& coupling, int agent,
                                          const Eigen::VectorXd& r, double sigma,
                                          double rho, const Dimensions& dims);

// Riccati recursion. If the input Hessian is indefinite or its condition
// number exceeds 1e12, the whole pass is retried with reg = 1e-6, 1e-5, ...
// up to 1e-2; beyond that a ConditioningError is thrown.
GainSchedule backward_pass(const LqrCosts& costs, const LqrDynamics& dyn,
                           double reg = 0.0);

// Propagates du = k + K dx through the linear dynamics from dx_0 = 0.
PerturbationTrajectory linear_forward_pass(const GainSchedule& gains,
                                           const LqrDynamics& dyn);

double lqr_objective(const LqrCosts& costs, const PerturbationTrajectory& p);

}  // namespace dilqr
