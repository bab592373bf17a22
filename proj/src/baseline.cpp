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

#include "dilqr/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <sstream>

namespace dilqr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Joint rollout: the feedback term mixes all vehicles' state deviations.
std::vector<Trajectory> joint_rollout(std::span<const Trajectory> nominal,
                                      const GainSchedule& gains, double alpha,
                                      const ScenarioSpec& spec) {
  const int N = static_cast<int>(nominal.size());
  const int T = spec.horizon;
  const VehicleParams params = vehicle_params(spec);
  std::vector<Trajectory> out(N);
  for (int i = 0; i < N; ++i) {
    out[i].states.resize(T + 1);
    out[i].inputs.resize(T);
    out[i].states[0] = nominal[i].states[0];
  }
  Eigen::VectorXd dx(kStateDim * N);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      dx.segment<kStateDim>(kStateDim * i) = out[i].states[t] - nominal[i].states[t];
    }
    const Eigen::VectorXd du = alpha * gains.k[t] + gains.K[t] * dx;
    for (int i = 0; i < N; ++i) {
      const ControlInput u =
          spec.bounds.clip(nominal[i].inputs[t] + du.segment<kInputDim>(kInputDim * i));
      out[i].inputs[t] = u;
      out[i].states[t + 1] = step(out[i].states[t], u, params).next;
    }
  }
  return out;
}

}  // namespace

JointModel stack_dynamics(std::span<const LinearizedDynamics> per_vehicle) {
  JointModel model;
  model.agents = static_cast<int>(per_vehicle.size());
  const int N = model.agents;
  const int T = N > 0 ? static_cast<int>(per_vehicle[0].A.size()) : 0;
  model.dynamics.A.assign(T, Eigen::MatrixXd::Zero(kStateDim * N, kStateDim * N));
  model.dynamics.B.assign(T, Eigen::MatrixXd::Zero(kStateDim * N, kInputDim * N));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      model.dynamics.A[t].block<kStateDim, kStateDim>(kStateDim * i, kStateDim * i) =
          per_vehicle[i].A[t];
      model.dynamics.B[t].block<kStateDim, kInputDim>(kStateDim * i, kInputDim * i) =
          per_vehicle[i].B[t];
    }
  }
  return model;
}

LqrCosts joint_costs(std::span<const StageQuadratics> host, const CouplingModel& coupling) {
  const int N = static_cast<int>(host.size());
  const int T = N > 0 ? static_cast<int>(host[0].cu.size()) : 0;
  const int nx = kStateDim * N, nu = kInputDim * N;
  LqrCosts c;
  c.Qxx.assign(T + 1, Eigen::MatrixXd::Zero(nx, nx));
  c.qx.assign(T + 1, Eigen::VectorXd::Zero(nx));
  c.Quu.assign(T, Eigen::MatrixXd::Zero(nu, nu));
  c.qu.assign(T, Eigen::VectorXd::Zero(nu));

  // Per-row (agent, gradient) entries of the joint Jacobian J_t = [J_t^1 ... J_t^N].
  std::vector<std::vector<std::pair<int, Eigen::Vector2d>>> by_row(coupling.pairs());
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < N; ++i) {
      c.Qxx[t].block<kStateDim, kStateDim>(kStateDim * i, kStateDim * i) = host[i].cxx[t];
      c.qx[t].segment<kStateDim>(kStateDim * i) = host[i].cx[t];
    }
    for (auto& r : by_row) r.clear();
    for (int i = 0; i < N; ++i) {
      for (const auto& r : coupling.rows(i, t)) by_row[r.row].emplace_back(i, r.grad);
    }
    const auto l = coupling.l_stage(t);
    for (int row = 0; row < coupling.pairs(); ++row) {
      const auto& entries = by_row[row];
      for (const auto& [a, ga] : entries) {
        c.qx[t].segment<2>(kStateDim * a) += 2.0 * ga * l[row];
        for (const auto& [b, gb] : entries) {
          c.Qxx[t].block<2, 2>(kStateDim * a, kStateDim * b) += 2.0 * ga * gb.transpose();
        }
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      c.Quu[t].block<kInputDim, kInputDim>(kInputDim * i, kInputDim * i) = host[i].cuu[t];
      c.qu[t].segment<kInputDim>(kInputDim * i) = host[i].cu[t];
    }
  }
  return c;
}

PlanResult solve_centralized(const ScenarioSpec& spec, const HyperParams& hyper) {
  auto problems = validate_scenario(spec);
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid problem:";
    for (const auto& p : problems) os << "\n  " << p;
    throw Error(os.str());
  }
  const auto start = Clock::now();
  const int N = spec.agents();
  const VehicleParams params = vehicle_params(spec);
  const CostWeights weights = cost_weights(spec);

  PlanResult result;
  result.solver = "centralized";
  PhaseTimings timing;
  std::vector<Trajectory> trajs = initial_trajectories(spec);
  result.cost_history.push_back(total_cost(trajs, spec));

  while (true) {
    auto phase = Clock::now();
    std::vector<LinearizedDynamics> lin(N);
    std::vector<StageQuadratics> host(N);
    for (int i = 0; i < N; ++i) {
      lin[i] = linearize_trajectory(trajs[i], params);
      host[i] = quadratize_host(trajs[i], spec.vehicles[i].reference, weights);
    }
    const CouplingModel coupling = build_coupling(trajs, spec.beta, spec.d_safe);
    const JointModel model = stack_dynamics(lin);
    const LqrCosts costs = joint_costs(host, coupling);
    timing.relinearize += seconds_since(phase);

    phase = Clock::now();
    const GainSchedule gains = backward_pass(costs, model.dynamics);
    timing.lqr += seconds_since(phase);
    timing.lqr_solves += 1;

    phase = Clock::now();
    int best_index = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<Trajectory> best_trajs;
    for (std::size_t a = 0; a < hyper.alpha_schedule.size(); ++a) {
      std::vector<Trajectory> cand = joint_rollout(trajs, gains, hyper.alpha_schedule[a], spec);
      const double c = total_cost(cand, spec);
      if (c < best) {
        best = c;
        best_index = static_cast<int>(a);
        best_trajs = std::move(cand);
      }
    }
    timing.line_search += seconds_since(phase);

    trajs = std::move(best_trajs);
    result.selected_alpha.push_back(best_index);
    result.cost_history.push_back(best);

    const int updates = static_cast<int>(result.cost_history.size()) - 1;
    if (termination_check(result.cost_history, hyper.outer_tol) == Termination::kStop) {
      result.converged = true;
      break;
    }
    if (updates >= hyper.max_outer_iters) break;
  }
  timing.admm = timing.lqr;

  result.trajectories = std::move(trajs);
  result.outer_iterations = static_cast<int>(result.selected_alpha.size());
  result.min_distance_per_stage = min_distance_per_stage(result.trajectories);
  result.min_distance =
      result.min_distance_per_stage.empty()
          ? std::numeric_limits<double>::infinity()
          : *std::min_element(result.min_distance_per_stage.begin(),
                              result.min_distance_per_stage.end());
  result.agent_timings.push_back(timing);
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace dilqr
