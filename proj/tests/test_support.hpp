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

// Shared helpers for the unit tests: seeded random instances and small
// scenario builders.

#pragma once

#include "dilqr/cost.hpp"
#include "dilqr/dynamics.hpp"
#include "dilqr/lqr.hpp"
#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <random>
#include <vector>

namespace dilqr::testing {

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Eigen::VectorXd vector(int n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v[k] = uniform(-scale, scale);
    return v;
  }
  Eigen::MatrixXd matrix(int r, int c, double scale = 1.0) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(-scale, scale);
    return m;
  }
  // Symmetric positive semidefinite with the given rank deficit-free floor.
  Eigen::MatrixXd spd(int n, double floor) {
    const Eigen::MatrixXd a = matrix(n, n);
    return a * a.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
  }

  VehicleState state(double vmax = 20.0) {
    return {uniform(-50, 50), uniform(-50, 50), uniform(-3.2, 3.2), uniform(0.0, vmax)};
  }
  ControlInput input(const InputBounds& b = {}) {
    return {uniform(b.lower[0], b.upper[0]), uniform(b.lower[1], b.upper[1])};
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

// Random trajectory obtained by rolling out random in-bound inputs.
inline Trajectory random_trajectory(Rng& rng, int horizon, const VehicleParams& p = {}) {
  std::vector<ControlInput> u(horizon);
  for (auto& x : u) x = rng.input();
  return rollout(rng.state(12.0), u, p).trajectory;
}

// Vehicle driving straight along +x at `speed`, reference equal to the
// zero-input rollout.
inline VehicleSpec straight_vehicle(double x0, double y0, double heading, double speed,
                                    int horizon, double dt = 0.1) {
  VehicleSpec v;
  v.initial = {x0, y0, heading, speed};
  v.reference.resize(horizon + 1);
  for (int t = 0; t <= horizon; ++t) {
    v.reference[t] = {x0 + std::cos(heading) * speed * dt * t,
                      y0 + std::sin(heading) * speed * dt * t, heading, speed};
  }
  return v;
}

// Random fleet packed into a small box so that many pairs are active.
inline std::vector<Trajectory> crowded_fleet(Rng& rng, int agents, int horizon) {
  std::vector<Trajectory> out;
  for (int i = 0; i < agents; ++i) {
    Trajectory tr;
    for (int t = 0; t <= horizon; ++t) {
      tr.states.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-3, 3),
                           rng.uniform(0, 10)});
    }
    for (int t = 0; t < horizon; ++t) tr.inputs.push_back(rng.input());
    out.push_back(tr);
  }
  return out;
}

// One agent's convex subproblem with random data: host quadratics with
// random positive semidefinite Hessians, a crowded coupling model, generic
// linear dynamics and a random r.
struct AgentInstance {
  Dimensions dims;
  StageQuadratics host;
  CouplingModel coupling;
  LqrDynamics dyn;
  Eigen::VectorXd r;
  int agent = 0;
  double sigma = 0.1, rho = 0.01;
};

inline AgentInstance random_agent_instance(Rng& rng, int agents, int horizon) {
  AgentInstance in;
  in.dims = compute_dimensions(agents, horizon);
  in.agent = rng.integer(0, agents - 1);
  in.coupling = build_coupling(crowded_fleet(rng, agents, horizon), rng.uniform(0.5, 3.0), 5.5);
  for (int t = 0; t <= horizon; ++t) {
    const Eigen::MatrixXd a = rng.matrix(4, 4);
    in.host.cxx.push_back(a * a.transpose());
    in.host.cx.push_back(rng.vector(4, 3.0));
  }
  for (int t = 0; t < horizon; ++t) {
    in.host.cuu.push_back(rng.spd(2, 0.1));
    in.host.cu.push_back(rng.vector(2, 3.0));
    in.dyn.A.push_back(Eigen::MatrixXd::Identity(4, 4) + rng.matrix(4, 4, 0.3));
    in.dyn.B.push_back(rng.matrix(4, 2));
  }
  in.r = rng.vector(in.dims.dual, 2.0);
  in.sigma = rng.uniform(0.01, 1.0);
  in.rho = rng.uniform(0.001, 0.1);
  return in;
}

}  // namespace dilqr::testing
