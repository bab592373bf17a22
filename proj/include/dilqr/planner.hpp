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

// Decentralized iLQR. Each agent repeats:
//
//   1. exchange trajectories, rebuild its convex model (l, J^i, A, B, host
//      quadratics, box bounds) and reset p, s while keeping y, z;
//   2. run a fixed number of dual consensus ADMM iterations, solving one LQR
//      per iteration and exchanging y with every peer;
//   3. roll out one dynamically feasible, clipped candidate per line-search
//      parameter, exchange the candidate lists and adopt the candidate index
//      whose joint cost is lowest.
//
// The loop stops once the joint cost changes by less than outer_tol.

#pragma once

#include "dilqr/cost.hpp"
#include "dilqr/dynamics.hpp"
#include "dilqr/lqr.hpp"
#include "dilqr/model.hpp"
#include "dilqr/net.hpp"

#include <chrono>
#include <span>
#include <string>
#include <vector>

namespace dilqr {

struct PhaseTimings {
  double relinearize = 0.0;
  double admm = 0.0;         // whole inner loop, LQR included
  double lqr = 0.0;
  double line_search = 0.0;  // candidate rollouts and their joint costs
  double exchange = 0.0;     // time spent inside post/collect
  long lqr_solves = 0;

  double compute() const { return relinearize + admm + line_search; }
};

struct PlanResult {
  std::string solver;
  std::vector<Trajectory> trajectories;
  std::vector<double> cost_history;        // J_0 (initial) .. J_K
  std::vector<double> consensus_variance;  // one entry per outer iteration
  std::vector<int> selected_alpha;         // line-search index per outer iteration
  std::vector<double> min_distance_per_stage;
  double min_distance = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  bool selection_consistent = true;  // every agent picked the same index

  double wall_seconds = 0.0;
  std::vector<PhaseTimings> agent_timings;  // one per agent (one entry for centralized)
  ExchangeStats exchange;

  double final_cost() const { return cost_history.empty() ? 0.0 : cost_history.back(); }
  // Mean wall time of one per-agent LQR solve.
  double mean_lqr_seconds() const;
  // Largest per-agent compute time: the run time with one core per agent and
  // free communication.
  double parallel_compute_seconds() const;
};

struct PlanOptions {
  int threads = 0;  // 0: one worker per agent
  std::chrono::milliseconds timeout{std::chrono::seconds(30)};
};

PlanResult plan_decentralized(const ScenarioSpec& spec, const HyperParams& hyper,
                              const PlanOptions& options = {});

// Zero-input rollouts (inputs clipped into the box), the common initial guess.
std::vector<Trajectory> initial_trajectories(const ScenarioSpec& spec);

// u_t = clip(u^_t + alpha k_t + K_t (x_t - x^_t)), x_{t+1} = f(x_t, u_t)
Trajectory feasible_rollout(const Trajectory& nominal, const GainSchedule& gains,
                            double alpha, const InputBounds& bounds,
                            const VehicleParams& params);

// One rollout per entry of the alpha schedule.
std::vector<Trajectory> candidate_rollouts(const Trajectory& nominal,
                                           const GainSchedule& gains,
                                           std::span<const double> alphas,
                                           const InputBounds& bounds,
                                           const VehicleParams& params);

struct CandidateChoice {
  int index = 0;
  std::vector<double> costs;  // joint cost per candidate index
};

// lists[j][a] is agent j's candidate for alpha index a. Picks the lowest joint
// cost; ties go to the smaller index.
CandidateChoice select_candidate(const std::vector<const std::vector<Trajectory>*>& lists,
                                 const ScenarioSpec& spec);

struct FeasibleUpdate {
  std::vector<Trajectory> trajectories;
  CandidateChoice choice;
};

// Centralized composition of candidate_rollouts() and select_candidate().
FeasibleUpdate feasible_update(std::span<const Trajectory> current,
                               std::span<const GainSchedule> gains,
                               std::span<const double> alphas, const ScenarioSpec& spec);

enum class Termination { kContinue, kStop };

// Stops when |J_k - J_{k-1}| < tol, or once max_iters updates were made.
Termination termination_check(const std::vector<double>& history, double tol,
                              int max_iters = -1);

}  // namespace dilqr
