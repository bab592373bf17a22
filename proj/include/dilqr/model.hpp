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

// Shared problem types: vehicle state/input, trajectories, scenario data,
// solver hyperparameters and the canonical dimension/index maps that every
// agent uses to lay out its dual vectors.

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dilqr {

inline constexpr int kStateDim = 4;
inline constexpr int kInputDim = 2;

// (px, py, theta, v). Heading is never wrapped.
using VehicleState = Eigen::Matrix<double, kStateDim, 1>;
// (delta, a): front-wheel steering angle and longitudinal acceleration.
using ControlInput = Eigen::Matrix<double, kInputDim, 1>;

enum StateIndex : int { kPx = 0, kPy = 1, kTheta = 2, kSpeed = 3 };
enum InputIndex : int { kSteer = 0, kAccel = 1 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<VehicleState> states;  // T + 1
  std::vector<ControlInput> inputs;  // T

  int horizon() const { return static_cast<int>(inputs.size()); }
  bool consistent() const { return states.size() == inputs.size() + 1; }
};

struct InputBounds {
  ControlInput lower{-0.6, -3.0};
  ControlInput upper{0.6, 1.5};

  ControlInput clip(const ControlInput& u) const {
    return u.cwiseMax(lower).cwiseMin(upper);
  }
};

struct VehicleSpec {
  std::string label;
  VehicleState initial = VehicleState::Zero();
  std::vector<VehicleState> reference;  // T + 1
};

struct ScenarioSpec {
  std::string name;
  int horizon = 100;
  double dt = 0.1;
  double wheelbase = 1.7;
  std::vector<VehicleSpec> vehicles;
  InputBounds bounds;
  Eigen::Vector4d q_diag{1.0, 1.0, 0.0, 0.0};
  Eigen::Vector2d r_diag{1.0, 1.0};
  double beta = 1.44;
  double d_safe = 5.5;

  int agents() const { return static_cast<int>(vehicles.size()); }
};

struct HyperParams {
  double sigma = 0.1;
  double rho = 0.01;
  int inner_iters = 2;
  std::vector<double> alpha_schedule{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.0};
  double outer_tol = 1.0;
  int max_outer_iters = 100;
};

// Divides sigma and rho by the agent count. Larger fleets tend to converge
// faster with smaller ADMM penalties; this is opt-in, never applied implicitly.
HyperParams scale_penalties_by_agents(HyperParams hyper, int agents);

struct Dimensions {
  int agents = 0;    // N
  int horizon = 0;   // T
  int n = kStateDim;
  int m = kInputDim;
  int pairs = 0;     // N(N-1)/2
  int decision = 0;  // M = (T+1)n + Tm
  int collision_rows = 0;  // N(N-1)(T+1)/2, block [1]
  int box_rows = 0;        // N T m, block [2]
  int dual = 0;            // D
  int degree = 0;          // N - 1 on the complete graph

  // First row of stage tau inside block [1].
  int collision_offset(int tau) const { return pairs * tau; }
  // First row of agent i's input block inside the full dual vector.
  int box_offset(int agent) const { return collision_rows + agent * horizon * m; }
};

Dimensions compute_dimensions(int agents, int horizon);

// Row of pair (i, j), 0-based with i < j, in lexicographic order
// (0,1), (0,2), ..., (1,2), ... Throws Error when i >= j or out of range.
int pair_index(int i, int j, int agents);

// Empty on success; otherwise one message per violated invariant.
std::vector<std::string> validate_scenario(const ScenarioSpec& spec);
std::vector<std::string> validate_hyperparams(const HyperParams& hyper);

}  // namespace dilqr
