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

// Centralized iLQR over the stacked 4N-state, 2N-input system with the same
// soft collision penalty, box clipping, line search and stopping rule as the
// decentralized planner. The collision penalty enters the joint stage
// Hessian through its Gauss-Newton model, which couples all vehicles and
// makes every backward-pass step O(N^3).

#pragma once

#include "dilqr/cost.hpp"
#include "dilqr/dynamics.hpp"
#include "dilqr/lqr.hpp"
#include "dilqr/model.hpp"
#include "dilqr/planner.hpp"

#include <span>
#include <vector>

namespace dilqr {

// Block-diagonal stacking of per-vehicle linearizations.
struct JointModel {
  LqrDynamics dynamics;
  int agents = 0;
};

JointModel stack_dynamics(std::span<const LinearizedDynamics> per_vehicle);

// Joint stage costs: per-vehicle host quadratics on the diagonal blocks plus
// 2 J_t' J_t and 2 J_t' l_t from the collision model.
LqrCosts joint_costs(std::span<const StageQuadratics> host, const CouplingModel& coupling);

PlanResult solve_centralized(const ScenarioSpec& spec, const HyperParams& hyper);

}  // namespace dilqr
