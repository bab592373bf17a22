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

// Exact cost evaluation and the convex model rebuilt at every outer iteration:
// quadratic host costs plus a Gauss-Newton model of the pairwise collision
// penalty.
//
// The collision penalty is written as a sum of squares. For every stage tau
// and pair i < j,
//
//   l_tau^{ij} = sqrt(beta) min(d_tau^{ij} - d_safe, 0)
//
// so that sum_{i<j} C_tau^{ij} = ||l_tau||^2. The l-vector is laid out
// time-major: stage tau occupies rows [P tau, P (tau + 1)) with P = N(N-1)/2,
// and rows within a stage follow pair_index().

#pragma once

#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace dilqr {

struct CostWeights {
  Eigen::Vector4d q_diag{1.0, 1.0, 0.0, 0.0};
  Eigen::Vector2d r_diag{1.0, 1.0};
};

inline CostWeights cost_weights(const ScenarioSpec& spec) {
  return {spec.q_diag, spec.r_diag};
}

double host_cost(const Trajectory& traj, const std::vector<VehicleState>& reference,
                 const CostWeights& w);

double collision_cost_pair(double distance, double beta, double d_safe);

double center_distance(const VehicleState& a, const VehicleState& b);

// Host costs of every vehicle plus pairwise collision costs over tau = 0..T.
double total_cost(std::span<const Trajectory> trajectories, const ScenarioSpec& spec);

// Collision part of total_cost() alone.
double collision_cost(std::span<const Trajectory> trajectories, double beta,
                      double d_safe);

// Smallest center distance over all pairs, per stage.
std::vector<double> min_distance_per_stage(std::span<const Trajectory> trajectories);

struct StageQuadratics {
  std::vector<Eigen::Vector4d> cx;  // T + 1, last entry is terminal
  std::vector<Eigen::Matrix4d> cxx; // T + 1
  std::vector<Eigen::Vector2d> cu;  // T
  std::vector<Eigen::Matrix2d> cuu; // T
};

StageQuadratics quadratize_host(const Trajectory& traj,
                                const std::vector<VehicleState>& reference,
                                const CostWeights& w);

// One nonzero row of J_tau^i. Only the (px, py) columns can be nonzero.
struct JacobianRow {
  int row = 0;  // pair_index(i, j)
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
};

class CouplingModel {
 public:
  CouplingModel() = default;
  CouplingModel(int agents, int horizon);

  int agents() const { return agents_; }
  int horizon() const { return horizon_; }
  int pairs() const { return pairs_; }

  const Eigen::VectorXd& l() const { return l_; }
  Eigen::VectorXd& l() { return l_; }
  auto l_stage(int tau) const { return l_.segment(pairs_ * tau, pairs_); }

  // Sparse rows of J_tau^i; at most N - 1 entries, ascending in row.
  const std::vector<JacobianRow>& rows(int agent, int tau) const {
    return rows_[agent * (horizon_ + 1) + tau];
  }
  std::vector<JacobianRow>& rows(int agent, int tau) {
    return rows_[agent * (horizon_ + 1) + tau];
  }

  // Dense J_tau^i (P x 4), mainly for tests.
  Eigen::MatrixXd dense_jacobian(int agent, int tau) const;
  // J_tau^i^T J_tau^i
  Eigen::Matrix4d jtj(int agent, int tau) const;
  // J_tau^i^T v for a stage slice v of length P
  Eigen::Vector4d jt_times(int agent, int tau,
                           const Eigen::Ref<const Eigen::VectorXd>& v) const;
  // J_tau^i dx written into a length-P slice
  void j_times(int agent, int tau, const Eigen::Vector4d& dx,
               Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  int agents_ = 0;
  int horizon_ = 0;
  int pairs_ = 0;
  Eigen::VectorXd l_;
  std::vector<std::vector<JacobianRow>> rows_;
};

// Throws Error naming the pair and stage if two centers coincide (d < 1e-9).
CouplingModel build_coupling(std::span<const Trajectory> trajectories, double beta,
                             double d_safe);

}  // namespace dilqr
