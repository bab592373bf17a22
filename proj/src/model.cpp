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

#include "dilqr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dilqr {

HyperParams scale_penalties_by_agents(HyperParams hyper, int agents) {
  if (agents > 0) {
    hyper.sigma /= agents;
    hyper.rho /= agents;
  }
  return hyper;
}

Dimensions compute_dimensions(int agents, int horizon) {
  Dimensions d;
  d.agents = agents;
  d.horizon = horizon;
  d.pairs = agents * (agents - 1) / 2;
  d.decision = (horizon + 1) * d.n + horizon * d.m;
  d.collision_rows = d.pairs * (horizon + 1);
  d.box_rows = agents * horizon * d.m;
  d.dual = d.collision_rows + d.box_rows;
  d.degree = agents - 1;
  return d;
}

int pair_index(int i, int j, int agents) {
  if (i < 0 || j >= agents || i >= j) {
    std::ostringstream os;
    os << "pair_index: need 0 <= i < j < N, got i=" << i << " j=" << j
       << " N=" << agents;
    throw Error(os.str());
  }
  // Rows taken by pairs whose first index is below i, then the offset in row i.
  return i * agents - i * (i + 1) / 2 + (j - i - 1);
}

namespace {

bool finite(const auto& v) { return v.allFinite(); }

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };

  if (spec.vehicles.empty()) fail("vehicles: N must be at least 1");
  if (spec.horizon < 1) fail("horizon: T must be at least 1");
  if (!(spec.dt > 0.0)) fail("dt: tau_s must be positive");
  if (!(spec.wheelbase > 0.0)) fail("wheelbase: b must be positive");
  if (!(spec.d_safe > 0.0)) fail("d_safe: safe distance must be positive");
  if (!(spec.beta > 0.0)) fail("beta must be positive");
  for (int c = 0; c < kInputDim; ++c) {
    if (!(spec.bounds.lower[c] < spec.bounds.upper[c])) {
      std::ostringstream os;
      os << "bounds: lower[" << c << "] must be below upper[" << c << "]";
      fail(os.str());
    }
  }
  if (!finite(spec.q_diag) || (spec.q_diag.array() < 0.0).any())
    fail("q_diag: entries must be finite and nonnegative");
  if (!finite(spec.r_diag) || (spec.r_diag.array() < 0.0).any())
    fail("r_diag: entries must be finite and nonnegative");

  for (std::size_t i = 0; i < spec.vehicles.size(); ++i) {
    const auto& v = spec.vehicles[i];
    std::ostringstream who;
    who << "vehicle " << i;
    if (!v.label.empty()) who << " (" << v.label << ")";
    if (!finite(v.initial)) fail(who.str() + ": initial state must be finite");
    if (spec.horizon >= 1 &&
        v.reference.size() != static_cast<std::size_t>(spec.horizon + 1)) {
      std::ostringstream os;
      os << who.str() << ": reference has " << v.reference.size()
         << " states, expected T+1 = " << spec.horizon + 1;
      fail(os.str());
    }
    for (const auto& r : v.reference) {
      if (!finite(r)) {
        fail(who.str() + ": reference contains non-finite values");
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> validate_hyperparams(const HyperParams& hyper) {
  std::vector<std::string> out;
  if (!(hyper.sigma > 0.0)) out.push_back("sigma must be positive");
  if (!(hyper.rho > 0.0)) out.push_back("rho must be positive");
  if (hyper.inner_iters < 1) out.push_back("inner_iters must be at least 1");
  if (hyper.max_outer_iters < 1) out.push_back("max_outer_iters must be at least 1");
  if (!(hyper.outer_tol >= 0.0)) out.push_back("outer_tol must be nonnegative");
  const auto& a = hyper.alpha_schedule;
  if (a.empty()) {
    out.push_back("alpha_schedule must not be empty");
  } else {
    if (std::find(a.begin(), a.end(), 0.0) == a.end())
      out.push_back("alpha_schedule must contain 0");
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!(a[k] >= 0.0 && a[k] <= 1.0)) {
        out.push_back("alpha_schedule entries must lie in [0, 1]");
        break;
      }
      if (k > 0 && !(a[k] < a[k - 1])) {
        out.push_back("alpha_schedule must be strictly descending");
        break;
      }
    }
  }
  return out;
}

}  // namespace dilqr
