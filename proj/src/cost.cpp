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

#include "dilqr/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dilqr {

namespace {

constexpr double kCoincident = 1e-9;

}  // namespace

double host_cost(const Trajectory& traj, const std::vector<VehicleState>& reference,
                 const CostWeights& w) {
  const int T = traj.horizon();
  double c = 0.0;
  for (int t = 0; t <= T; ++t) {
    const Eigen::Vector4d e = traj.states[t] - reference[t];
    c += e.dot(w.q_diag.cwiseProduct(e));
  }
  for (int t = 0; t < T; ++t) {
    c += traj.inputs[t].dot(w.r_diag.cwiseProduct(traj.inputs[t]));
  }
  return c;
}

double collision_cost_pair(double distance, double beta, double d_safe) {
  if (distance >= d_safe) return 0.0;
  const double gap = distance - d_safe;
  return beta * gap * gap;
}

double center_distance(const VehicleState& a, const VehicleState& b) {
  return std::hypot(a[kPx] - b[kPx], a[kPy] - b[kPy]);
}

double collision_cost(std::span<const Trajectory> trajectories, double beta,
                      double d_safe) {
  const int N = static_cast<int>(trajectories.size());
  if (N < 2) return 0.0;
  const int T = trajectories[0].horizon();
  double c = 0.0;
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        c += collision_cost_pair(
            center_distance(trajectories[i].states[t], trajectories[j].states[t]), beta,
            d_safe);
      }
    }
  }
  return c;
}

double total_cost(std::span<const Trajectory> trajectories, const ScenarioSpec& spec) {
  const CostWeights w = cost_weights(spec);
  double c = 0.0;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    c += host_cost(trajectories[i], spec.vehicles[i].reference, w);
  }
  return c + collision_cost(trajectories, spec.beta, spec.d_safe);
}

std::vector<double> min_distance_per_stage(std::span<const Trajectory> trajectories) {
  const int N = static_cast<int>(trajectories.size());
  const int T = N > 0 ? trajectories[0].horizon() : 0;
  std::vector<double> out(N > 0 ? T + 1 : 0, std::numeric_limits<double>::infinity());
  for (int t = 0; t <= T && N > 0; ++t) {
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        out[t] = std::min(out[t], center_distance(trajectories[i].states[t],
                                                  trajectories[j].states[t]));
      }
    }
  }
  return out;
}

StageQuadratics quadratize_host(const Trajectory& traj,
                                const std::vector<VehicleState>& reference,
                                const CostWeights& w) {
  const int T = traj.horizon();
  const Eigen::Matrix4d Q2 = (2.0 * w.q_diag).asDiagonal();
  const Eigen::Matrix2d R2 = (2.0 * w.r_diag).asDiagonal();
  StageQuadratics q;
  q.cx.resize(T + 1);
  q.cxx.assign(T + 1, Q2);
  q.cu.resize(T);
  q.cuu.assign(T, R2);
  for (int t = 0; t <= T; ++t) q.cx[t] = Q2 * (traj.states[t] - reference[t]);
  for (int t = 0; t < T; ++t) q.cu[t] = R2 * traj.inputs[t];
  return q;
}

CouplingModel::CouplingModel(int agents, int horizon)
    : agents_(agents),
      horizon_(horizon),
      pairs_(agents * (agents - 1) / 2),
      l_(Eigen::VectorXd::Zero(pairs_ * (horizon + 1))),
      rows_(static_cast<std::size_t>(agents) * (horizon + 1)) {}

Eigen::MatrixXd CouplingModel::dense_jacobian(int agent, int tau) const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(pairs_, kStateDim);
  for (const auto& r : rows(agent, tau)) J.row(r.row).head<2>() = r.grad.transpose();
  return J;
}

Eigen::Matrix4d CouplingModel::jtj(int agent, int tau) const {
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  for (const auto& r : rows(agent, tau)) {
    H.topLeftCorner<2, 2>() += r.grad * r.grad.transpose();
  }
  return H;
}

Eigen::Vector4d CouplingModel::jt_times(int agent, int tau,
                                        const Eigen::Ref<const Eigen::VectorXd>& v) const {
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (const auto& r : rows(agent, tau)) g.head<2>() += r.grad * v[r.row];
  return g;
}

void CouplingModel::j_times(int agent, int tau, const Eigen::Vector4d& dx,
                            Eigen::Ref<Eigen::VectorXd> out) const {
  out.setZero();
  for (const auto& r : rows(agent, tau)) out[r.row] = r.grad.dot(dx.head<2>());
}

CouplingModel build_coupling(std::span<const Trajectory> trajectories, double beta,
                             double d_safe) {
  const int N = static_cast<int>(trajectories.size());
  const int T = N > 0 ? trajectories[0].horizon() : 0;
  CouplingModel model(N, T);
  const double sb = std::sqrt(beta);
  for (int t = 0; t <= T; ++t) {
    int row = 0;  // lexicographic, matches pair_index(i, j, N)
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j, ++row) {
        const VehicleState& xi = trajectories[i].states[t];
        const VehicleState& xj = trajectories[j].states[t];
        const Eigen::Vector2d diff = xi.head<2>() - xj.head<2>();
        const double d = diff.norm();
        if (d < kCoincident) {
          std::ostringstream os;
          os << "build_coupling: vehicles " << i << " and " << j
             << " have coincident centers at stage " << t;
          throw Error(os.str());
        }
        // Inactive at d == d_safe: the one-sided derivative there is zero.
        if (d >= d_safe) continue;
        model.l()[model.pairs() * t + row] = sb * (d - d_safe);
        const Eigen::Vector2d g = sb * diff / d;
        model.rows(i, t).push_back({row, g});
        model.rows(j, t).push_back({row, -g});
      }
    }
  }
  // Rows were appended in pair order per agent, so each list is already sorted.
  return model;
}

}  // namespace dilqr
