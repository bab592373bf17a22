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

// Scenario files (JSON), the built-in road scenarios and result emission.
// The file schema is documented in docs/scenario_schema.md.

#pragma once

#include "dilqr/model.hpp"
#include "dilqr/planner.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace dilqr {

struct LoadedScenario {
  ScenarioSpec spec;
  HyperParams hyper;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

// A polyline followed at constant speed, sampled every speed * dt metres of
// arc length. Past the last vertex the final segment is extended.
struct PathSpec {
  std::vector<Eigen::Vector2d> points;
  double speed = 0.0;
};

std::vector<VehicleState> sample_path(const PathSpec& path, int horizon, double dt);

LoadedScenario parse_scenario(const std::string& text);
LoadedScenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const ScenarioSpec& spec, const HyperParams& hyper);
void save_scenario(const std::filesystem::path& path, const ScenarioSpec& spec,
                   const HyperParams& hyper);

// Bump when a layout default below changes. The acceptance tolerances were
// pinned against this version.
inline constexpr int kBuiltinLayoutVersion = 1;

// Three vehicles at a T-junction. The main road runs along x, the side road
// joins from the south along x = 0. Vehicle 0 drives east, vehicle 1 west and
// vehicle 2 turns left out of the side road into the westbound lane.
struct TJunctionLayout {
  double east_start = -41.81;  // x of vehicle 0 at t = 0
  double west_start = 43.58;   // x of vehicle 1
  double side_start = -31.69;  // y of vehicle 2
  double main_speed = 6.36;
  double side_speed = 5.27;
  double turn_radius = 6.77;
};

ScenarioSpec generate_t_junction(const TJunctionLayout& layout = {});

// Four-way intersection of two two-lane roads crossing at the origin,
// right-hand traffic, lanes 1.75 m off the centre lines. Vehicle k comes from
// approach k % 4 (W, S, E, N) and is the (k / 4)-th vehicle of its lane:
// rank 0 goes straight, rank 1 turns left, rank 2 turns right.
struct IntersectionLayout {
  std::array<double, 4> lead{17.9, 27.5, 46.1, 36.8};  // start distance of rank 0, per approach
  double gap = 12.53;                                   // queue spacing within a lane
  double speed = 9.3;
  double left_radius = 7.0;
  double right_radius = 3.5;
};

// Vehicle k of intersection(n) is vehicle k of intersection(12) for every n,
// so smaller instances are prefixes of the full one.
ScenarioSpec generate_intersection(int vehicles, const IntersectionLayout& layout = {});

// Resolves "t-junction" or "intersection:N".
ScenarioSpec builtin_scenario(const std::string& name);

// Solver settings used with the builtins: sigma = 0.1, rho = 0.01 and two
// inner iterations for the T-junction; sigma = 0.01, rho = 0.001 and three
// inner iterations for the intersection.
HyperParams builtin_hyperparams(const std::string& name);

nlohmann::json metrics_to_json(const PlanResult& result, const ScenarioSpec& spec,
                               const HyperParams& hyper);
PlanResult metrics_from_json(const nlohmann::json& doc);

// Writes trajectories.csv, metrics.json and the SVG plots into `outdir`.
// Returns the paths written.
std::vector<std::filesystem::path> emit(const PlanResult& result, const ScenarioSpec& spec,
                                        const HyperParams& hyper,
                                        const std::filesystem::path& outdir);

std::string trajectories_csv(const std::vector<Trajectory>& trajectories);

}  // namespace dilqr
