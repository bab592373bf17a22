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

#include "dilqr/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace dilqr {

namespace {

// Smallest positive radicand we treat as regular for the analytic Jacobian.
constexpr double kSingularRadicand = 1e-12;

}  // namespace

Displacement f_r(double v, double delta, const VehicleParams& p) {
  const double b = p.wheelbase;
  const double lateral = p.dt * v * std::sin(delta);
  const double radicand = b * b - lateral * lateral;
  Displacement out;
  out.saturated = radicand < 0.0;
  out.value = b + p.dt * v * std::cos(delta) - std::sqrt(std::max(0.0, radicand));
  return out;
}

StepResult step(const VehicleState& x, const ControlInput& u, const VehicleParams& p) {
  const double v = x[kSpeed];
  const double theta = x[kTheta];
  const double delta = u[kSteer];

  const Displacement fr = f_r(v, delta, p);
  double s = p.dt * v * std::sin(delta) / p.wheelbase;
  bool clamped = false;
  if (s > 1.0 || s < -1.0) {
    s = std::clamp(s, -1.0, 1.0);
    clamped = true;
  }

  StepResult out;
  out.next[kPx] = x[kPx] + fr.value * std::cos(theta);
  out.next[kPy] = x[kPy] + fr.value * std::sin(theta);
  out.next[kTheta] = theta + std::asin(s);
  out.next[kSpeed] = v + p.dt * u[kAccel];
  out.saturated = fr.saturated || clamped;
  return out;
}

RolloutResult rollout(const VehicleState& x0, const std::vector<ControlInput>& inputs,
                      const VehicleParams& p) {
  RolloutResult out;
  out.trajectory.inputs = inputs;
  out.trajectory.states.reserve(inputs.size() + 1);
  out.trajectory.states.push_back(x0);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    StepResult s = step(out.trajectory.states.back(), inputs[t], p);
    if (s.saturated) out.saturated_stages.push_back(static_cast<int>(t));
    out.trajectory.states.push_back(s.next);
  }
  return out;
}

Linearization linearize_numeric(const VehicleState& x, const ControlInput& u,
                                const VehicleParams& p, double h) {
  Linearization lin;
  lin.finite_difference = true;
  for (int k = 0; k < kStateDim; ++k) {
    VehicleState xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    lin.A.col(k) = (step(xp, u, p).next - step(xm, u, p).next) / (2.0 * h);
  }
  for (int k = 0; k < kInputDim; ++k) {
    ControlInput up = u, um = u;
    up[k] += h;
    um[k] -= h;
    lin.B.col(k) = (step(x, up, p).next - step(x, um, p).next) / (2.0 * h);
  }
  return lin;
}

Linearization linearize(const VehicleState& x, const ControlInput& u,
                        const VehicleParams& p) {
  const double b = p.wheelbase;
  const double dt = p.dt;
  const double v = x[kSpeed];
  const double theta = x[kTheta];
  const double delta = u[kSteer];
  const double sd = std::sin(delta), cd = std::cos(delta);
  const double st = std::sin(theta), ct = std::cos(theta);

  const double lateral = dt * v * sd;
  const double radicand = b * b - lateral * lateral;
  if (radicand <= kSingularRadicand * b * b) return linearize_numeric(x, u, p);
  const double root = std::sqrt(radicand);

  const double fr = b + dt * v * cd - root;
  // d/dv and d/d(delta) of f_r
  const double dfr_dv = dt * cd + dt * sd * lateral / root;
  const double dfr_dd = -dt * v * sd + dt * v * cd * lateral / root;
  // heading increment g = asin(lateral / b); sqrt(1 - (lateral/b)^2) = root / b
  const double dg_dv = dt * sd / root;
  const double dg_dd = dt * v * cd / root;

  Linearization lin;
  lin.A.setIdentity();
  lin.A(kPx, kTheta) = -fr * st;
  lin.A(kPx, kSpeed) = dfr_dv * ct;
  lin.A(kPy, kTheta) = fr * ct;
  lin.A(kPy, kSpeed) = dfr_dv * st;
  lin.A(kTheta, kSpeed) = dg_dv;

  lin.B.setZero();
  lin.B(kPx, kSteer) = dfr_dd * ct;
  lin.B(kPy, kSteer) = dfr_dd * st;
  lin.B(kTheta, kSteer) = dg_dd;
  lin.B(kSpeed, kAccel) = dt;
  return lin;
}

LinearizedDynamics linearize_trajectory(const Trajectory& traj, const VehicleParams& p) {
  LinearizedDynamics out;
  const int T = traj.horizon();
  out.A.resize(T);
  out.B.resize(T);
  for (int t = 0; t < T; ++t) {
    Linearization lin = linearize(traj.states[t], traj.inputs[t], p);
    out.A[t] = lin.A;
    out.B[t] = lin.B;
    if (lin.finite_difference) out.fallback_stages.push_back(t);
  }
  return out;
}

double dynamics_residual(const Trajectory& traj, const VehicleParams& p) {
  double worst = 0.0;
  for (int t = 0; t < traj.horizon(); ++t) {
    const VehicleState pred = step(traj.states[t], traj.inputs[t], p).next;
    worst = std::max(worst, (traj.states[t + 1] - pred).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dilqr
