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

// Discrete kinematic bicycle model:
//
//   px'    = px + f_r(v, delta) cos(theta)
//   py'    = py + f_r(v, delta) sin(theta)
//   theta' = theta + asin(dt v sin(delta) / b)
//   v'     = v + dt a
//
//   f_r(v, delta) = b + dt v cos(delta) - sqrt(b^2 - (dt v sin(delta))^2)
//
// The square root and arcsine arguments are clamped to their domains; when
// that happens the result carries a saturation flag instead of throwing.

#pragma once

#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace dilqr {

struct VehicleParams {
  double wheelbase = 1.7;
  double dt = 0.1;
};

inline VehicleParams vehicle_params(const ScenarioSpec& spec) {
  return {spec.wheelbase, spec.dt};
}

using StateJacobian = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputJacobian = Eigen::Matrix<double, kStateDim, kInputDim>;

struct Displacement {
  double value = 0.0;
  bool saturated = false;
};

struct StepResult {
  VehicleState next;
  bool saturated = false;
};

struct RolloutResult {
  Trajectory trajectory;
  std::vector<int> saturated_stages;
};

struct Linearization {
  StateJacobian A;
  InputJacobian B;
  bool finite_difference = false;  // analytic form was singular here
};

struct LinearizedDynamics {
  std::vector<StateJacobian> A;  // T
  std::vector<InputJacobian> B;  // T
  std::vector<int> fallback_stages;
};

Displacement f_r(double v, double delta, const VehicleParams& p);

StepResult step(const VehicleState& x, const ControlInput& u, const VehicleParams& p);

RolloutResult rollout(const VehicleState& x0, const std::vector<ControlInput>& inputs,
                      const VehicleParams& p);

Linearization linearize(const VehicleState& x, const ControlInput& u,
                        const VehicleParams& p);

// Central differences of step(); the fallback path and the test oracle.
Linearization linearize_numeric(const VehicleState& x, const ControlInput& u,
                                const VehicleParams& p, double h = 1e-6);

LinearizedDynamics linearize_trajectory(const Trajectory& traj, const VehicleParams& p);

// max over tau of || x_{tau+1} - f(x_tau, u_tau) ||_inf
double dynamics_residual(const Trajectory& traj, const VehicleParams& p);

}  // namespace dilqr
