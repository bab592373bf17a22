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

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dilqr {
namespace {

using testing::Rng;

ScenarioSpec spec_for(const std::vector<Trajectory>& trajs, Rng& rng) {
  ScenarioSpec spec;
  spec.horizon = trajs[0].horizon();
  for (const auto& tr : trajs) {
    VehicleSpec v;
    v.initial = tr.states[0];
    for (const auto& x : tr.states) v.reference.push_back(x + rng.vector(4, 2.0));
    spec.vehicles.push_back(v);
  }
  return spec;
}

std::vector<Trajectory> crowded(Rng& rng, int agents, int horizon) {
  return testing::crowded_fleet(rng, agents, horizon);
}

TEST(HostCost, OnReference) {
  Trajectory tr;
  tr.states.assign(6, VehicleState{1, 2, 3, 4});
  tr.inputs.assign(5, ControlInput::Zero());
  EXPECT_EQ(host_cost(tr, tr.states, CostWeights{}), 0.0);
}

TEST(HostCost, SingleOffset) {
  Trajectory tr;
  tr.states.assign(6, VehicleState::Zero());
  tr.inputs.assign(5, ControlInput::Zero());
  auto ref = tr.states;
  ref[3][kPx] = 1.0;
  EXPECT_DOUBLE_EQ(host_cost(tr, ref, CostWeights{}), 1.0);
  // heading and speed carry zero weight by default
  ref[3] = {0, 0, 5, 5};
  EXPECT_DOUBLE_EQ(host_cost(tr, ref, CostWeights{}), 0.0);
  // terminal stage counts
  ref[5][kPy] = 2.0;
  EXPECT_DOUBLE_EQ(host_cost(tr, ref, CostWeights{}), 4.0);
}

TEST(HostCost, MatchesResummation) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Trajectory tr = testing::random_trajectory(rng, 30);
    std::vector<VehicleState> ref;
    for (const auto& x : tr.states) ref.push_back(x + rng.vector(4, 3.0));
    CostWeights w{rng.vector(4).cwiseAbs(), rng.vector(2).cwiseAbs()};
    double oracle = 0.0;
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      for (int c = 0; c < 4; ++c) {
        const double e = tr.states[t][c] - ref[t][c];
        oracle += w.q_diag[c] * e * e;
      }
    }
    for (const auto& u : tr.inputs) {
      oracle += w.r_diag[0] * u[0] * u[0] + w.r_diag[1] * u[1] * u[1];
    }
    EXPECT_NEAR(host_cost(tr, ref, w), oracle, 1e-10 * std::max(1.0, oracle));
  }
}

TEST(CollisionPair, Branches) {
  EXPECT_EQ(collision_cost_pair(6.0, 1.44, 5.5), 0.0);
  EXPECT_EQ(collision_cost_pair(5.5, 1.44, 5.5), 0.0);
  EXPECT_NEAR(collision_cost_pair(2.5, 1.44, 5.5), 12.96, 1e-12);
}

TEST(TotalCost, FarApartOnReference) {
  ScenarioSpec spec;
  spec.horizon = 10;
  spec.vehicles = {testing::straight_vehicle(0, 0, 0, 5, 10),
                   testing::straight_vehicle(0, 20, 0, 5, 10)};
  std::vector<Trajectory> trajs(2);
  for (int i = 0; i < 2; ++i) {
    trajs[i].states = spec.vehicles[i].reference;
    trajs[i].inputs.assign(10, ControlInput::Zero());
  }
  EXPECT_EQ(total_cost(trajs, spec), 0.0);
}

TEST(TotalCost, StationaryPairIncludesTerminalStage) {
  ScenarioSpec spec;
  spec.vehicles = {testing::straight_vehicle(0, 0, 0, 0, 100),
                   testing::straight_vehicle(2.5, 0, 0, 0, 100)};
  std::vector<Trajectory> trajs(2);
  for (int i = 0; i < 2; ++i) {
    trajs[i].states = spec.vehicles[i].reference;
    trajs[i].inputs.assign(100, ControlInput::Zero());
  }
  EXPECT_NEAR(total_cost(trajs, spec), 1308.96, 1e-9);
}

TEST(TotalCost, HostPlusResidualNorm) {
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const int N = rng.integer(2, 6);
    const auto trajs = crowded(rng, N, 8);
    const ScenarioSpec spec = spec_for(trajs, rng);
    const CouplingModel c = build_coupling(trajs, spec.beta, spec.d_safe);
    double host = 0.0;
    for (int i = 0; i < N; ++i) host += host_cost(trajs[i], spec.vehicles[i].reference, {});
    const double total = total_cost(trajs, spec);
    EXPECT_NEAR(total, host + c.l().squaredNorm(), 1e-9 * std::max(1.0, total));
    EXPECT_NEAR(collision_cost(trajs, spec.beta, spec.d_safe), c.l().squaredNorm(), 1e-10);
  }
}

TEST(MinDistance, PerStage) {
  std::vector<Trajectory> trajs(3);
  trajs[0].states = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  trajs[1].states = {{3, 4, 0, 0}, {1, 0, 0, 0}};
  trajs[2].states = {{0, 10, 0, 0}, {0, 2, 0, 0}};
  for (auto& tr : trajs) tr.inputs = {ControlInput::Zero()};
  const auto d = min_distance_per_stage(trajs);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d[0], 5.0);
  EXPECT_DOUBLE_EQ(d[1], 1.0);
}

TEST(Quadratize, OnReferenceGradientsVanish) {
  Trajectory tr;
  tr.states.assign(4, VehicleState{1, 1, 1, 1});
  tr.inputs.assign(3, ControlInput::Zero());
  const StageQuadratics q = quadratize_host(tr, tr.states, {});
  for (const auto& g : q.cx) EXPECT_EQ(g, Eigen::Vector4d::Zero());
  for (const auto& g : q.cu) EXPECT_EQ(g, Eigen::Vector2d::Zero());
  EXPECT_EQ(q.cxx[0], Eigen::Vector4d(2, 2, 0, 0).asDiagonal().toDenseMatrix());
  EXPECT_EQ(q.cuu[0], Eigen::Matrix2d::Identity() * 2.0);
}

TEST(Quadratize, ModelIsExact) {
  Rng rng(23);
  const Trajectory tr = testing::random_trajectory(rng, 15);
  std::vector<VehicleState> ref;
  for (const auto& x : tr.states) ref.push_back(x + rng.vector(4, 3.0));
  const CostWeights w{rng.vector(4).cwiseAbs(), rng.vector(2).cwiseAbs()};
  const StageQuadratics q = quadratize_host(tr, ref, w);
  for (int k = 0; k < 10; ++k) {
    Trajectory p = tr;
    double model = host_cost(tr, ref, w);
    for (std::size_t t = 0; t < p.states.size(); ++t) {
      const Eigen::Vector4d dx = rng.vector(4, 5.0);
      p.states[t] += dx;
      model += q.cx[t].dot(dx) + 0.5 * dx.dot(q.cxx[t] * dx);
    }
    for (std::size_t t = 0; t < p.inputs.size(); ++t) {
      const Eigen::Vector2d du = rng.vector(2, 1.0);
      p.inputs[t] += du;
      model += q.cu[t].dot(du) + 0.5 * du.dot(q.cuu[t] * du);
    }
    EXPECT_NEAR(model, host_cost(p, ref, w), 1e-9 * std::max(1.0, model));
  }
}

TEST(Quadratize, DefaultWeightsIgnoreHeadingAndSpeed) {
  Rng rng(29);
  const Trajectory tr = testing::random_trajectory(rng, 10);
  std::vector<VehicleState> ref;
  for (const auto& x : tr.states) ref.push_back(x + rng.vector(4, 3.0));
  const StageQuadratics q = quadratize_host(tr, ref, {});
  for (const auto& g : q.cx) {
    EXPECT_EQ(g[kTheta], 0.0);
    EXPECT_EQ(g[kSpeed], 0.0);
  }
}

TEST(Coupling, AllFarApart) {
  std::vector<Trajectory> trajs(3);
  for (int i = 0; i < 3; ++i) {
    trajs[i].states.assign(4, VehicleState{10.0 * i, 0, 0, 0});
    trajs[i].inputs.assign(3, ControlInput::Zero());
  }
  const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
  EXPECT_EQ(c.l().size(), 3 * 4);
  EXPECT_EQ(c.l().squaredNorm(), 0.0);
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t <= 3; ++t) EXPECT_TRUE(c.rows(i, t).empty());
}

TEST(Coupling, TwoVehicleExample) {
  std::vector<Trajectory> trajs(2);
  trajs[0].states = {{0, 0, 0, 0}};
  trajs[1].states = {{3, 0, 0, 0}};
  const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
  EXPECT_NEAR(c.l()[0], -3.0, 1e-12);
  ASSERT_EQ(c.rows(0, 0).size(), 1u);
  EXPECT_NEAR(c.rows(0, 0)[0].grad[0], -1.2, 1e-12);
  EXPECT_NEAR(c.rows(1, 0)[0].grad[0], 1.2, 1e-12);

  // finite-difference check of the l entry
  const double h = 1e-6;
  auto l_at = [&](double px) {
    auto t = trajs;
    t[0].states[0][kPx] = px;
    return build_coupling(t, 1.44, 5.5).l()[0];
  };
  EXPECT_NEAR((l_at(h) - l_at(-h)) / (2 * h), -1.2, 1e-8);
}

TEST(Coupling, BoundaryIsInactive) {
  std::vector<Trajectory> trajs(2);
  trajs[0].states = {{0, 0, 0, 0}};
  trajs[1].states = {{5.5, 0, 0, 0}};
  const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
  EXPECT_EQ(c.l()[0], 0.0);
  EXPECT_TRUE(c.rows(0, 0).empty());
}

TEST(Coupling, CoincidentCentersRejected) {
  std::vector<Trajectory> trajs(3);
  trajs[0].states = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  trajs[1].states = {{9, 0, 0, 0}, {1, 1, 0, 0}};
  trajs[2].states = {{-9, 0, 0, 0}, {1, 1, 0, 0}};
  for (auto& tr : trajs) tr.inputs = {ControlInput::Zero()};
  try {
    build_coupling(trajs, 1.44, 5.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("1 and 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("stage 1"), std::string::npos) << msg;
  }
}

TEST(Coupling, LayoutSparsityAntisymmetry) {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const int N = rng.integer(2, 7);
    const int T = 5;
    const auto trajs = crowded(rng, N, T);
    const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
    for (int t = 0; t <= T; ++t) {
      for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
          const double d = center_distance(trajs[i].states[t], trajs[j].states[t]);
          const int row = c.pairs() * t + pair_index(i, j, N);
          EXPECT_NEAR(c.l()[row], 1.2 * std::min(d - 5.5, 0.0), 1e-12);
        }
      }
      for (int i = 0; i < N; ++i) {
        const Eigen::MatrixXd J = c.dense_jacobian(i, t);
        int nonzero = 0;
        for (int r = 0; r < J.rows(); ++r) nonzero += J.row(r).squaredNorm() > 0.0;
        EXPECT_LE(nonzero, N - 1);
        EXPECT_EQ(J.rightCols<2>().squaredNorm(), 0.0);
        EXPECT_LT((c.jtj(i, t) - J.transpose() * J).norm(), 1e-12);
        const Eigen::VectorXd v = rng.vector(c.pairs());
        EXPECT_LT((c.jt_times(i, t, v) - J.transpose() * v).norm(), 1e-12);
        const Eigen::Vector4d dx = rng.vector(4);
        Eigen::VectorXd out(c.pairs());
        c.j_times(i, t, dx, out);
        EXPECT_LT((out - J * dx).norm(), 1e-12);
      }
      for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
          const int r = pair_index(i, j, N);
          EXPECT_EQ(c.dense_jacobian(i, t).row(r), -c.dense_jacobian(j, t).row(r));
        }
      }
    }
  }
}

TEST(Coupling, RowsMatchFiniteDifferences) {
  Rng rng(37);
  const double h = 1e-6;
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    const int N = rng.integer(2, 5);
    const auto trajs = crowded(rng, N, 2);
    const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
    for (int i = 0; i < N; ++i) {
      for (int t = 0; t <= 2; ++t) {
        for (const auto& row : c.rows(i, t)) {
          Eigen::Vector2d fd;
          for (int a = 0; a < 2; ++a) {
            auto p = trajs, m = trajs;
            p[i].states[t][a] += h;
            m[i].states[t][a] -= h;
            const int idx = c.pairs() * t + row.row;
            fd[a] = (build_coupling(p, 1.44, 5.5).l()[idx] -
                     build_coupling(m, 1.44, 5.5).l()[idx]) /
                    (2 * h);
          }
          EXPECT_LT((fd - row.grad).norm() / row.grad.norm(), 1e-4);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Coupling, GaussNewtonDirectionalDerivative) {
  Rng rng(41);
  const double h = 1e-6;
  for (int k = 0; k < 30; ++k) {
    const int N = rng.integer(2, 5);
    const auto trajs = crowded(rng, N, 0);
    const CouplingModel c = build_coupling(trajs, 1.44, 5.5);
    if (c.l().squaredNorm() == 0.0) continue;
    std::vector<Eigen::Vector4d> dir(N);
    double model = 0.0;  // d/de ||l + sum_i J_i e dx_i||^2 at e = 0
    Eigen::VectorXd jd = Eigen::VectorXd::Zero(c.pairs());
    for (int i = 0; i < N; ++i) {
      dir[i] = rng.vector(4);
      jd += c.dense_jacobian(i, 0) * dir[i];
    }
    model = 2.0 * c.l().dot(jd);
    auto cost_at = [&](double e) {
      auto t = trajs;
      for (int i = 0; i < N; ++i) t[i].states[0] += e * dir[i];
      return collision_cost(t, 1.44, 5.5);
    };
    const double fd = (cost_at(h) - cost_at(-h)) / (2 * h);
    EXPECT_LT(std::abs(fd - model) / std::max(std::abs(fd), 1e-8), 1e-4);
  }
}

}  // namespace
}  // namespace dilqr
