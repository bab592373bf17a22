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

// Dual consensus ADMM, per agent. Every agent keeps a local copy y^i of the
// dual of the coupled problem
//
//   min sum_i F^i(dX^i) + G(sum_i J^i dX^i),  G(w) = ||w_[1] + l||^2 + I_box(w_[2])
//
// together with z^i, p^i, s^i. All updates below are closed form. Dual vectors
// have D rows: block [1] (collision rows, time-major) then block [2] (box rows,
// agent-major, T m rows per agent).
//
// Peer vectors are always passed ordered by ascending agent id, so every sum
// has a fixed evaluation order.

#pragma once

#include "dilqr/cost.hpp"
#include "dilqr/lqr.hpp"
#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace dilqr {

struct DualState {
  Eigen::VectorXd y, z, p, s;

  DualState() = default;
  explicit DualState(int dual_dim);

  // Start of an outer iteration: p and s restart from zero, y and z carry over.
  void reset_multipliers();
};

// Feasible input perturbations for every agent: u_min - u <= du <= u_max - u.
struct BoxBounds {
  Eigen::VectorXd lower;  // N T m
  Eigen::VectorXd upper;
};

BoxBounds make_box_bounds(std::span<const Trajectory> trajectories,
                          const InputBounds& bounds);

using PeerVectors = std::vector<const Eigen::VectorXd*>;

// p + rho sum_j (y_self - y_j); throws Error unless exactly `expected_peers` given.
Eigen::VectorXd p_update(const Eigen::VectorXd& p, const Eigen::VectorXd& y_self,
                         const PeerVectors& y_others, double rho, int expected_peers);

// s + sigma (y - z)
Eigen::VectorXd s_update(const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& z, double sigma);

// rho sum_j (y_self + y_j) + sigma z - p' - s'
Eigen::VectorXd compute_r(const Eigen::VectorXd& y_self, const PeerVectors& y_others,
                          const Eigen::VectorXd& z, const Eigen::VectorXd& p_new,
                          const Eigen::VectorXd& s_new, double rho, double sigma);

// J^i dX^i as a D-vector: J_tau^i dx_tau stacked in block [1], du^i in the
// agent's own rows of block [2], zero elsewhere.
Eigen::VectorXd j_apply(const CouplingModel& coupling, int agent,
                        const PerturbationTrajectory& dX, const Dimensions& dims);

// (J dX + r) / (sigma + 2 rho d_i)
Eigen::VectorXd y_update(const Eigen::VectorXd& j_dx, const Eigen::VectorXd& r,
                         double sigma, double rho, int degree);

// Collision block: 2 / (2 N sigma + 1) (N s + N sigma y + l).
Eigen::VectorXd z1_update(const Eigen::Ref<const Eigen::VectorXd>& s1,
                          const Eigen::Ref<const Eigen::VectorXd>& y1,
                          const Eigen::VectorXd& l, int agents, double sigma);

// Box block: z* = clamp(N (s + sigma y), lower, upper);
// z = s / sigma + y - z* / (N sigma).
Eigen::VectorXd z2_update(const Eigen::Ref<const Eigen::VectorXd>& s2,
                          const Eigen::Ref<const Eigen::VectorXd>& y2,
                          const BoxBounds& box, int agents, double sigma);

// Writes both blocks of z from the current s and y.
void z_update(DualState& dual, const Eigen::VectorXd& l, const BoxBounds& box,
              const Dimensions& dims, double sigma);

// Mean over coordinates of the population variance across agents.
double consensus_variance(const PeerVectors& ys);

}  // namespace dilqr
