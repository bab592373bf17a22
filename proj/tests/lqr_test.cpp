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

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace dilqr {
namespace {

using testing::Rng;

LqrCosts augmented(const testing::AgentInstance& in) {
  return build_augmented_costs(in.host, in.coupling, in.agent, in.r, in.sigma, in.rho, in.dims);
}

TEST(Augment, ZeroCouplingAddsInputDiagonal) {
  const Dimensions d = compute_dimensions(3, 4);
  Rng rng(1);
  testing::AgentInstance in = testing::random_agent_instance(rng, 3, 4);
  in.coupling = CouplingModel(3, 4);
  in.r.setZero();
  in.sigma = 0.1;
  in.rho = 0.01;
  const LqrCosts c = augmented(in);
  for (int t = 0; t <= 4; ++t) {
    EXPECT_EQ(c.Qxx[t], Eigen::MatrixXd(in.host.cxx[t]));
    EXPECT_EQ(c.qx[t], Eigen::VectorXd(in.host.cx[t]));
  }
  for (int t = 0; t < 4; ++t) {
    // 1 / (0.1 + 2 * 0.01 * 2) = 1 / 0.14
    const Eigen::MatrixXd added = c.Quu[t] - in.host.cuu[t];
    EXPECT_NEAR(added(0, 0), 7.142857142857143, 1e-12);
    EXPECT_NEAR(added(1, 1), 7.142857142857143, 1e-12);
    EXPECT_NEAR(added(0, 1), 0.0, 1e-15);
    EXPECT_EQ(c.qu[t], Eigen::VectorXd(in.host.cu[t]));
  }
  (void)d;
}

TEST(Augment, SlicesTheRightRows) {
  Rng rng(2);
  const testing::AgentInstance in = testing::random_agent_instance(rng, 4, 3);
  const LqrCosts c = augmented(in);
  const double inv = 1.0 / (in.sigma + 2.0 * in.rho * 3);
  for (int t = 0; t <= 3; ++t) {
    const Eigen::MatrixXd J = in.coupling.dense_jacobian(in.agent, t);
    const Eigen::VectorXd r1 = in.r.segment(in.dims.pairs * t, in.dims.pairs);
    EXPECT_LT((c.qx[t] - in.host.cx[t] - inv * J.transpose() * r1).norm(), 1e-12);
  }
  for (int t = 0; t < 3; ++t) {
    const Eigen::VectorXd r2 = in.r.segment(in.dims.box_offset(in.agent) + 2 * t, 2);
    EXPECT_LT((c.qu[t] - in.host.cu[t] - inv * r2).norm(), 1e-12);
  }
}

TEST(Augment, DimensionMismatchNamesBlocks) {
  Rng rng(3);
  testing::AgentInstance in = testing::random_agent_instance(rng, 3, 4);
  in.r.resize(in.dims.dual - 1);
  try {
    augmented(in);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("collision block"), std::string::npos);
    EXPECT_NE(msg.find("box block"), std::string::npos);
  }
}

TEST(Augment, StagewiseObjectiveEqualsDenseObjective) {
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    const testing::AgentInstance in = testing::random_agent_instance(rng, rng.integer(2, 5), 6);
    const LqrCosts c = augmented(in);
    const oracle::AgentQp qp =
        oracle::agent_qp(in.host, in.coupling, in.agent, in.r, in.sigma, in.rho, in.dims, in.dyn);
    PerturbationTrajectory p;
    for (int t = 0; t <= 6; ++t) p.dx.push_back(rng.vector(4, 2.0));
    for (int t = 0; t < 6; ++t) p.du.push_back(rng.vector(2, 2.0));
    const double dense = qp.objective(oracle::flatten(p));
    EXPECT_NEAR(lqr_objective(c, p), dense, 1e-8 * std::max(1.0, std::abs(dense)));
  }
}

TEST(Riccati, ZeroLinearTermsGiveZeroFeedforward) {
  Rng rng(5);
  testing::AgentInstance in = testing::random_agent_instance(rng, 3, 5);
  LqrCosts c = augmented(in);
  for (auto& q : c.qx) q.setZero();
  for (auto& q : c.qu) q.setZero();
  const GainSchedule g = backward_pass(c, in.dyn);
  for (const auto& k : g.k) EXPECT_LT(k.norm(), 1e-14);
  const PerturbationTrajectory p = linear_forward_pass(g, in.dyn);
  for (const auto& x : p.dx) EXPECT_LT(x.norm(), 1e-14);
}

TEST(Riccati, SingleStageHandSolution) {
  // T = 1, A = I, B = [I; 0]. Objective 0.5 u'Ru + q'u + 0.5 x1'Px1 + p'x1
  // with x1 = B u, so u* = -(R + B'PB)^-1 (q + B'p).
  LqrCosts c;
  c.Qxx = {Eigen::MatrixXd::Identity(4, 4), Eigen::MatrixXd::Identity(4, 4) * 3.0};
  c.qx = {Eigen::VectorXd::Zero(4), Eigen::Vector4d(1.0, -2.0, 0.5, 0.0)};
  c.Quu = {Eigen::Matrix2d{{2.0, 0.5}, {0.5, 1.0}}};
  c.qu = {Eigen::Vector2d(0.3, -0.7)};
  LqrDynamics dyn;
  dyn.A = {Eigen::MatrixXd::Identity(4, 4)};
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B.topRows(2).setIdentity();
  dyn.B = {B};
  const GainSchedule g = backward_pass(c, dyn);
  // R + 3I = [[5, .5], [.5, 4]], q + B'p = (1.3, -2.7)
  const Eigen::Matrix2d H{{5.0, 0.5}, {0.5, 4.0}};
  const Eigen::Vector2d expected = -H.inverse() * Eigen::Vector2d(1.3, -2.7);
  EXPECT_LT((g.k[0] - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Riccati, MatchesDenseKkt) {
  Rng rng(6);
  for (int k = 0; k < 50; ++k) {
    const int T = rng.integer(1, 8);
    const testing::AgentInstance in = testing::random_agent_instance(rng, rng.integer(1, 5), T);
    const LqrCosts c = augmented(in);
    const PerturbationTrajectory p = linear_forward_pass(backward_pass(c, in.dyn), in.dyn);
    const oracle::AgentQp qp =
        oracle::agent_qp(in.host, in.coupling, in.agent, in.r, in.sigma, in.rho, in.dims, in.dyn);
    const Eigen::VectorXd w = oracle::solve_equality_qp(qp.H, qp.g, qp.E);
    ASSERT_LT((oracle::flatten(p) - w).cwiseAbs().maxCoeff(), 1e-6) << "instance " << k;
  }
}

TEST(Riccati, ImprovesOnNullStep) {
  Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    const testing::AgentInstance in = testing::random_agent_instance(rng, 3, 8);
    const LqrCosts c = augmented(in);
    const PerturbationTrajectory p = linear_forward_pass(backward_pass(c, in.dyn), in.dyn);
    EXPECT_LE(lqr_objective(c, p), 1e-12);
  }
}

TEST(Riccati, LinearFeasibility) {
  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const testing::AgentInstance in = testing::random_agent_instance(rng, 2, 8);
    const PerturbationTrajectory p =
        linear_forward_pass(backward_pass(augmented(in), in.dyn), in.dyn);
    EXPECT_EQ(p.dx[0].norm(), 0.0);
    for (int t = 0; t < 8; ++t) {
      const Eigen::VectorXd res = p.dx[t + 1] - in.dyn.A[t] * p.dx[t] - in.dyn.B[t] * p.du[t];
      EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Riccati, ZeroGainsGiveZeroPerturbation) {
  GainSchedule g;
  g.k.assign(3, Eigen::VectorXd::Zero(2));
  g.K.assign(3, Eigen::MatrixXd::Zero(2, 4));
  LqrDynamics dyn;
  dyn.A.assign(3, Eigen::MatrixXd::Identity(4, 4));
  dyn.B.assign(3, Eigen::MatrixXd::Ones(4, 2));
  const PerturbationTrajectory p = linear_forward_pass(g, dyn);
  for (const auto& x : p.dx) EXPECT_EQ(x.norm(), 0.0);
  for (const auto& u : p.du) EXPECT_EQ(u.norm(), 0.0);
}

TEST(Riccati, GainShapeIndependentOfFleetSize) {
  Rng rng(9);
  for (int n : {1, 4, 12}) {
    const testing::AgentInstance in = testing::random_agent_instance(rng, n, 4);
    const GainSchedule g = backward_pass(augmented(in), in.dyn);
    ASSERT_EQ(g.K.size(), 4u);
    EXPECT_EQ(g.K[0].rows(), 2);
    EXPECT_EQ(g.K[0].cols(), 4);
    EXPECT_EQ(g.k[0].size(), 2);
  }
}

TEST(Riccati, RegularizationLadder) {
  // Quu with one eigenvalue 1e-13: condition 1e13 fails without help, a
  // 1e-6 Levenberg term repairs it.
  LqrCosts c;
  c.Qxx.assign(2, Eigen::MatrixXd::Zero(4, 4));
  c.qx.assign(2, Eigen::VectorXd::Zero(4));
  c.Quu = {Eigen::Vector2d(1.0, 1e-13).asDiagonal().toDenseMatrix()};
  c.qu = {Eigen::Vector2d(1.0, 1.0)};
  LqrDynamics dyn;
  dyn.A = {Eigen::MatrixXd::Identity(4, 4)};
  dyn.B = {Eigen::MatrixXd::Zero(4, 2)};
  const GainSchedule g = backward_pass(c, dyn);
  EXPECT_EQ(g.regularization, 1e-6);
  EXPECT_TRUE(g.k[0].allFinite());

  // Indefinite beyond what 1e-2 can fix.
  c.Quu = {Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix()};
  try {
    backward_pass(c, dyn);
    FAIL();
  } catch (const ConditioningError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 0"), std::string::npos);
  }
}

}  // namespace
}  // namespace dilqr
