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

#include "dilqr/lqr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

namespace dilqr {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kFirstReg = 1e-6;
constexpr double kMaxReg = 1e-2;

struct StageFailure {
  int stage = 0;
  double condition = 0.0;
};

// Runs the recursion once; returns the failing stage if Quu is unusable.
std::optional<StageFailure> riccati(const LqrCosts& c, const LqrDynamics& dyn,
                                    double reg, GainSchedule& out) {
  const int T = c.horizon();
  out.k.resize(T);
  out.K.resize(T);
  Eigen::MatrixXd V = c.Qxx[T];
  Eigen::VectorXd v = c.qx[T];
  for (int t = T - 1; t >= 0; --t) {
    const Eigen::MatrixXd& A = dyn.A[t];
    const Eigen::MatrixXd& B = dyn.B[t];
    const Eigen::MatrixXd VA = V * A;
    const Eigen::MatrixXd VB = V * B;

    const Eigen::VectorXd Qx = c.qx[t] + A.transpose() * v;
    const Eigen::VectorXd Qu = c.qu[t] + B.transpose() * v;
    const Eigen::MatrixXd Qxx = c.Qxx[t] + A.transpose() * VA;
    const Eigen::MatrixXd Qux = B.transpose() * VA;
    Eigen::MatrixXd Quu = c.Quu[t] + B.transpose() * VB;
    Quu = 0.5 * (Quu + Quu.transpose()).eval();
    Quu.diagonal().array() += reg;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Quu, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi > kMaxCondition * lo) {
      return StageFailure{t, lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()};
    }

    Eigen::LLT<Eigen::MatrixXd> llt(Quu);
    out.k[t] = -llt.solve(Qu);
    out.K[t] = -llt.solve(Qux);
    const Eigen::VectorXd& k = out.k[t];
    const Eigen::MatrixXd& K = out.K[t];

    // Full form keeps V consistent with the regularized gains.
    v = Qx + K.transpose() * (Quu * k) + K.transpose() * Qu + Qux.transpose() * k;
    V = Qxx + K.transpose() * Quu * K + K.transpose() * Qux + Qux.transpose() * K;
    V = 0.5 * (V + V.transpose()).eval();
  }
  return std::nullopt;
}

}  // namespace

LqrDynamics to_lqr_dynamics(const LinearizedDynamics& lin) {
  LqrDynamics d;
  d.A.reserve(lin.A.size());
  d.B.reserve(lin.B.size());
  for (const auto& A : lin.A) d.A.emplace_back(A);
  for (const auto& B : lin.B) d.B.emplace_back(B);
  return d;
}

AugmentedStageCosts build_augmented_costs(const StageQuadratics& host,
                                          const CouplingModel& coupling, int agent,
                                          const Eigen::VectorXd& r, double sigma,
                                          double rho, const Dimensions& dims) {
  const int T = dims.horizon;
  if (r.size() != dims.dual) {
    std::ostringstream os;
    os << "build_augmented_costs: r has " << r.size() << " rows, expected D = "
       << dims.dual << " (collision block " << dims.collision_rows << " + box block "
       << dims.box_rows << ")";
    throw Error(os.str());
  }
  if (static_cast<int>(host.cu.size()) != T || coupling.horizon() != T ||
      coupling.pairs() != dims.pairs) {
    throw Error("build_augmented_costs: host quadratics or coupling model do not match "
                "the problem dimensions");
  }
  const double inv = 1.0 / (sigma + 2.0 * rho * dims.degree);

  AugmentedStageCosts c;
  c.Qxx.resize(T + 1);
  c.qx.resize(T + 1);
  c.Quu.resize(T);
  c.qu.resize(T);
  for (int t = 0; t <= T; ++t) {
    const auto r1 = r.segment(dims.collision_offset(t), dims.pairs);
    c.Qxx[t] = host.cxx[t] + inv * coupling.jtj(agent, t);
    c.qx[t] = host.cx[t] + inv * coupling.jt_times(agent, t, r1);
  }
  const int box = dims.box_offset(agent);
  for (int t = 0; t < T; ++t) {
    c.Quu[t] = host.cuu[t] + inv * Eigen::Matrix2d::Identity();
    c.qu[t] = host.cu[t] + inv * r.segment<kInputDim>(box + t * kInputDim);
  }
  return c;
}

GainSchedule backward_pass(const LqrCosts& costs, const LqrDynamics& dyn, double reg) {
  GainSchedule out;
  double lambda = reg;
  while (true) {
    auto failure = riccati(costs, dyn, lambda, out);
    if (!failure) {
      out.regularization = lambda;
      return out;
    }
    if (lambda >= kMaxReg) {
      std::ostringstream os;
      os << "backward_pass: input Hessian ill-conditioned at stage " << failure->stage
         << " (condition estimate " << failure->condition << ") with regularization "
         << lambda;
      throw ConditioningError(os.str());
    }
    lambda = lambda < kFirstReg ? kFirstReg : std::min(kMaxReg, lambda * 10.0);
  }
}

PerturbationTrajectory linear_forward_pass(const GainSchedule& gains,
                                           const LqrDynamics& dyn) {
  const int T = static_cast<int>(gains.k.size());
  PerturbationTrajectory p;
  p.dx.resize(T + 1);
  p.du.resize(T);
  p.dx[0] = Eigen::VectorXd::Zero(dyn.A.empty() ? 0 : dyn.A[0].rows());
  for (int t = 0; t < T; ++t) {
    p.du[t] = gains.k[t] + gains.K[t] * p.dx[t];
    p.dx[t + 1] = dyn.A[t] * p.dx[t] + dyn.B[t] * p.du[t];
  }
  return p;
}

double lqr_objective(const LqrCosts& costs, const PerturbationTrajectory& p) {
  double f = 0.0;
  for (std::size_t t = 0; t < p.dx.size(); ++t) {
    f += 0.5 * p.dx[t].dot(costs.Qxx[t] * p.dx[t]) + costs.qx[t].dot(p.dx[t]);
  }
  for (std::size_t t = 0; t < p.du.size(); ++t) {
    f += 0.5 * p.du[t].dot(costs.Quu[t] * p.du[t]) + costs.qu[t].dot(p.du[t]);
  }
  return f;
}

}  // namespace dilqr
