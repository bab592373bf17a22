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

#include "dilqr/admm.hpp"

#include <sstream>

namespace dilqr {

DualState::DualState(int dual_dim)
    : y(Eigen::VectorXd::Zero(dual_dim)),
      z(Eigen::VectorXd::Zero(dual_dim)),
      p(Eigen::VectorXd::Zero(dual_dim)),
      s(Eigen::VectorXd::Zero(dual_dim)) {}

void DualState::reset_multipliers() {
  p.setZero();
  s.setZero();
}

BoxBounds make_box_bounds(std::span<const Trajectory> trajectories,
                          const InputBounds& bounds) {
  const int N = static_cast<int>(trajectories.size());
  const int T = N > 0 ? trajectories[0].horizon() : 0;
  BoxBounds box;
  box.lower.resize(N * T * kInputDim);
  box.upper.resize(N * T * kInputDim);
  int row = 0;
  for (int i = 0; i < N; ++i) {
    for (int t = 0; t < T; ++t, row += kInputDim) {
      const ControlInput& u = trajectories[i].inputs[t];
      box.lower.segment<kInputDim>(row) = bounds.lower - u;
      box.upper.segment<kInputDim>(row) = bounds.upper - u;
    }
  }
  return box;
}

Eigen::VectorXd p_update(const Eigen::VectorXd& p, const Eigen::VectorXd& y_self,
                         const PeerVectors& y_others, double rho, int expected_peers) {
  if (static_cast<int>(y_others.size()) != expected_peers) {
    std::ostringstream os;
    os << "p_update: expected " << expected_peers << " peer vectors, got "
       << y_others.size();
    throw Error(os.str());
  }
  Eigen::VectorXd out = p;
  for (const Eigen::VectorXd* yj : y_others) out += rho * (y_self - *yj);
  return out;
}

Eigen::VectorXd s_update(const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& z, double sigma) {
  return s + sigma * (y - z);
}

Eigen::VectorXd compute_r(const Eigen::VectorXd& y_self, const PeerVectors& y_others,
                          const Eigen::VectorXd& z, const Eigen::VectorXd& p_new,
                          const Eigen::VectorXd& s_new, double rho, double sigma) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(y_self.size());
  for (const Eigen::VectorXd* yj : y_others) sum += y_self + *yj;
  return rho * sum + sigma * z - p_new - s_new;
}

Eigen::VectorXd j_apply(const CouplingModel& coupling, int agent,
                        const PerturbationTrajectory& dX, const Dimensions& dims) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dims.dual);
  for (int t = 0; t <= dims.horizon; ++t) {
    const Eigen::Vector4d dx = dX.dx[t];
    for (const auto& r : coupling.rows(agent, t)) {
      out[dims.collision_offset(t) + r.row] = r.grad.dot(dx.head<2>());
    }
  }
  const int box = dims.box_offset(agent);
  for (int t = 0; t < dims.horizon; ++t) {
    out.segment<kInputDim>(box + t * kInputDim) = dX.du[t];
  }
  return out;
}

Eigen::VectorXd y_update(const Eigen::VectorXd& j_dx, const Eigen::VectorXd& r,
                         double sigma, double rho, int degree) {
  return (j_dx + r) / (sigma + 2.0 * rho * degree);
}

Eigen::VectorXd z1_update(const Eigen::Ref<const Eigen::VectorXd>& s1,
                          const Eigen::Ref<const Eigen::VectorXd>& y1,
                          const Eigen::VectorXd& l, int agents, double sigma) {
  const double n = agents;
  return (2.0 / (2.0 * n * sigma + 1.0)) * (n * s1 + n * sigma * y1 + l);
}

Eigen::VectorXd z2_update(const Eigen::Ref<const Eigen::VectorXd>& s2,
                          const Eigen::Ref<const Eigen::VectorXd>& y2,
                          const BoxBounds& box, int agents, double sigma) {
  const double n = agents;
  const Eigen::VectorXd projected =
      (n * (s2 + sigma * y2)).cwiseMax(box.lower).cwiseMin(box.upper);
  return s2 / sigma + y2 - projected / (n * sigma);
}

void z_update(DualState& dual, const Eigen::VectorXd& l, const BoxBounds& box,
              const Dimensions& dims, double sigma) {
  const int c = dims.collision_rows;
  const int b = dims.box_rows;
  if (c > 0) {
    dual.z.head(c) = z1_update(dual.s.head(c), dual.y.head(c), l, dims.agents, sigma);
  }
  dual.z.tail(b) = z2_update(dual.s.tail(b), dual.y.tail(b), box, dims.agents, sigma);
}

double consensus_variance(const PeerVectors& ys) {
  if (ys.empty() || ys.front()->size() == 0) return 0.0;
  const double n = static_cast<double>(ys.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(ys.front()->size());
  for (const auto* y : ys) mean += *y;
  mean /= n;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(mean.size());
  for (const auto* y : ys) var += (*y - mean).cwiseAbs2();
  var /= n;
  return var.mean();
}

}  // namespace dilqr
