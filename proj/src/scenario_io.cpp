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

#include "dilqr/scenario_io.hpp"

#include "dilqr/cost.hpp"
#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace dilqr {

using nlohmann::json;

namespace {

constexpr double kLaneOffset = 1.75;  // lane centre to road centre line

// Reports the line and column of a byte offset in `text`.
std::string position_of(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <int Rows>
Eigen::Matrix<double, Rows, 1> vec_from(const json& j, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != Rows) {
    throw ScenarioError(what + ": expected an array of " + std::to_string(Rows) + " numbers");
  }
  Eigen::Matrix<double, Rows, 1> v;
  for (int k = 0; k < Rows; ++k) v[k] = j.at(k).get<double>();
  return v;
}

template <typename Derived>
json vec_to(const Eigen::MatrixBase<Derived>& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

json states_to(const std::vector<VehicleState>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(vec_to(x));
  return out;
}

// JSON has no infinity, so non-finite numbers travel as null.
json num_to(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::vector<Eigen::Vector2d> arc(const Eigen::Vector2d& centre, double radius, double from,
                                 double to, int segments = 24) {
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k <= segments; ++k) {
    const double a = from + (to - from) * k / segments;
    pts.emplace_back(centre + radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
  }
  return pts;
}

void append(std::vector<Eigen::Vector2d>& path, const std::vector<Eigen::Vector2d>& more) {
  for (const auto& p : more) {
    if (path.empty() || (path.back() - p).norm() > 1e-9) path.push_back(p);
  }
}

VehicleSpec vehicle_from_path(const std::string& label, const PathSpec& path, int horizon,
                              double dt) {
  VehicleSpec v;
  v.label = label;
  v.reference = sample_path(path, horizon, dt);
  v.initial = v.reference.front();
  return v;
}

void check_paths(const PathSpec& p, const std::string& label) {
  if (p.points.size() < 2) throw ScenarioError(label + ": path needs at least two points");
  if (!(p.speed > 0.0)) throw ScenarioError(label + ": path speed must be positive");
}

enum class Movement { kStraight, kLeft, kRight };

// Path of a vehicle entering from the west at distance `start` before the
// stop line region, expressed in the canonical frame (heading +x, right-hand
// traffic). Other approaches are rotations of this frame.
std::vector<Eigen::Vector2d> canonical_path(Movement move, double start,
                                            const IntersectionLayout& layout) {
  const double lane = -kLaneOffset;
  std::vector<Eigen::Vector2d> pts{{-start, lane}};
  switch (move) {
    case Movement::kStraight:
      append(pts, {{-5.25, lane}, {200.0, lane}});
      break;
    case Movement::kLeft: {
      const double r = layout.left_radius;
      const Eigen::Vector2d c(kLaneOffset - r, lane + r);
      append(pts, {{c.x(), lane}});
      append(pts, arc(c, r, -std::numbers::pi / 2, 0.0));
      append(pts, {{c.x() + r, 200.0}});
      break;
    }
    case Movement::kRight: {
      const double r = layout.right_radius;
      const Eigen::Vector2d c(-kLaneOffset - r, lane - r);
      append(pts, {{c.x(), lane}});
      append(pts, arc(c, r, std::numbers::pi / 2, 0.0));
      append(pts, {{c.x() + r, -200.0}});
      break;
    }
  }
  return pts;
}

// Exact quarter turns counter-clockwise: (x, y) -> (-y, x).
std::vector<Eigen::Vector2d> rotate(std::vector<Eigen::Vector2d> pts, int quarter_turns) {
  for (auto& p : pts) {
    for (int k = 0; k < quarter_turns; ++k) p = Eigen::Vector2d(-p.y(), p.x());
  }
  return pts;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

json timings_to(const PhaseTimings& t) {
  return {{"relinearize", t.relinearize}, {"admm", t.admm},         {"lqr", t.lqr},
          {"line_search", t.line_search}, {"exchange", t.exchange}, {"lqr_solves", t.lqr_solves}};
}

PhaseTimings timings_from(const json& j) {
  PhaseTimings t;
  t.relinearize = j.at("relinearize").get<double>();
  t.admm = j.at("admm").get<double>();
  t.lqr = j.at("lqr").get<double>();
  t.line_search = j.at("line_search").get<double>();
  t.exchange = j.at("exchange").get<double>();
  t.lqr_solves = j.at("lqr_solves").get<long>();
  return t;
}

}  // namespace

std::vector<VehicleState> sample_path(const PathSpec& path, int horizon, double dt) {
  check_paths(path, "path");
  const auto& pts = path.points;
  std::vector<double> cum{0.0};
  for (std::size_t k = 1; k < pts.size(); ++k) cum.push_back(cum.back() + (pts[k] - pts[k - 1]).norm());
  if (cum.back() <= 0.0) throw ScenarioError("path has zero length");

  std::vector<VehicleState> out;
  out.reserve(horizon + 1);
  double prev_heading = 0.0;
  std::size_t seg = 1;
  for (int t = 0; t <= horizon; ++t) {
    const double s = path.speed * dt * t;
    while (seg + 1 < pts.size() && cum[seg] < s) ++seg;
    // Skip degenerate segments.
    std::size_t use = seg;
    while (use > 1 && (pts[use] - pts[use - 1]).norm() <= 0.0) --use;
    const Eigen::Vector2d a = pts[use - 1], b = pts[use];
    const double len = (b - a).norm();
    const Eigen::Vector2d dir = (b - a) / len;
    const Eigen::Vector2d p = a + dir * (s - cum[use - 1]);
    double heading = std::atan2(dir.y(), dir.x());
    if (t > 0) {
      while (heading - prev_heading > std::numbers::pi) heading -= 2 * std::numbers::pi;
      while (heading - prev_heading < -std::numbers::pi) heading += 2 * std::numbers::pi;
    }
    prev_heading = heading;
    out.emplace_back(p.x(), p.y(), heading, path.speed);
  }
  return out;
}

LoadedScenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario parse error at " + position_of(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario document must be a JSON object");

  LoadedScenario out;
  ScenarioSpec& spec = out.spec;
  HyperParams& hyper = out.hyper;
  try {
    spec.name = doc.value("name", std::string("scenario"));
    spec.horizon = doc.value("horizon", spec.horizon);
    spec.dt = doc.value("dt", spec.dt);
    spec.wheelbase = doc.value("wheelbase", spec.wheelbase);
    spec.beta = doc.value("beta", spec.beta);
    spec.d_safe = doc.value("d_safe", spec.d_safe);
    if (doc.contains("bounds")) {
      const json& b = doc.at("bounds");
      if (b.contains("steer")) {
        const auto s = vec_from<2>(b.at("steer"), "bounds.steer");
        spec.bounds.lower[kSteer] = s[0];
        spec.bounds.upper[kSteer] = s[1];
      }
      if (b.contains("accel")) {
        const auto a = vec_from<2>(b.at("accel"), "bounds.accel");
        spec.bounds.lower[kAccel] = a[0];
        spec.bounds.upper[kAccel] = a[1];
      }
    }
    if (doc.contains("weights")) {
      const json& w = doc.at("weights");
      if (w.contains("q")) spec.q_diag = vec_from<4>(w.at("q"), "weights.q");
      if (w.contains("r")) spec.r_diag = vec_from<2>(w.at("r"), "weights.r");
    }
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      hyper.sigma = s.value("sigma", hyper.sigma);
      hyper.rho = s.value("rho", hyper.rho);
      hyper.inner_iters = s.value("inner_iters", hyper.inner_iters);
      if (s.contains("alpha_schedule")) {
        hyper.alpha_schedule = s.at("alpha_schedule").get<std::vector<double>>();
      }
      hyper.outer_tol = s.value("outer_tol", hyper.outer_tol);
      hyper.max_outer_iters = s.value("max_outer_iters", hyper.max_outer_iters);
    }
    if (!doc.contains("vehicles") || !doc.at("vehicles").is_array()) {
      throw ScenarioError("scenario needs a \"vehicles\" array");
    }
    int index = 0;
    for (const json& v : doc.at("vehicles")) {
      VehicleSpec vs;
      vs.label = v.value("label", "vehicle" + std::to_string(index));
      const std::string who = "vehicle " + std::to_string(index) + " (" + vs.label + ")";
      if (v.contains("reference")) {
        const json& ref = v.at("reference");
        if (!ref.is_array()) throw ScenarioError(who + ": reference must be an array");
        for (std::size_t k = 0; k < ref.size(); ++k) {
          vs.reference.push_back(
              vec_from<4>(ref[k], who + ": reference[" + std::to_string(k) + "]"));
        }
      } else if (v.contains("path")) {
        const json& p = v.at("path");
        PathSpec path;
        for (const json& pt : p.at("points")) path.points.push_back(vec_from<2>(pt, who + ": path point"));
        path.speed = p.at("speed").get<double>();
        check_paths(path, who);
        vs.reference = sample_path(path, spec.horizon, spec.dt);
      } else {
        throw ScenarioError(who + ": needs either \"reference\" or \"path\"");
      }
      if (v.contains("initial")) {
        vs.initial = vec_from<4>(v.at("initial"), who + ": initial");
      } else if (!vs.reference.empty()) {
        vs.initial = vs.reference.front();
      }
      spec.vehicles.push_back(std::move(vs));
      ++index;
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario field error: ") + e.what());
  }

  std::vector<std::string> problems = validate_scenario(spec);
  for (auto& p : validate_hyperparams(hyper)) problems.push_back(std::move(p));
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid scenario:";
    for (const auto& p : problems) os << "\n  " << p;
    throw ScenarioError(os.str());
  }
  return out;
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

json scenario_to_json(const ScenarioSpec& spec, const HyperParams& hyper) {
  json doc;
  doc["name"] = spec.name;
  doc["horizon"] = spec.horizon;
  doc["dt"] = spec.dt;
  doc["wheelbase"] = spec.wheelbase;
  doc["beta"] = spec.beta;
  doc["d_safe"] = spec.d_safe;
  doc["bounds"] = {{"steer", {spec.bounds.lower[kSteer], spec.bounds.upper[kSteer]}},
                   {"accel", {spec.bounds.lower[kAccel], spec.bounds.upper[kAccel]}}};
  doc["weights"] = {{"q", vec_to(spec.q_diag)}, {"r", vec_to(spec.r_diag)}};
  doc["solver"] = {{"sigma", hyper.sigma},
                   {"rho", hyper.rho},
                   {"inner_iters", hyper.inner_iters},
                   {"alpha_schedule", hyper.alpha_schedule},
                   {"outer_tol", hyper.outer_tol},
                   {"max_outer_iters", hyper.max_outer_iters}};
  json vehicles = json::array();
  for (const auto& v : spec.vehicles) {
    vehicles.push_back(
        {{"label", v.label}, {"initial", vec_to(v.initial)}, {"reference", states_to(v.reference)}});
  }
  doc["vehicles"] = std::move(vehicles);
  return doc;
}

void save_scenario(const std::filesystem::path& path, const ScenarioSpec& spec,
                   const HyperParams& hyper) {
  write_file(path, scenario_to_json(spec, hyper).dump(1) + "\n");
}

ScenarioSpec generate_t_junction(const TJunctionLayout& layout) {
  ScenarioSpec spec;
  spec.name = "t-junction";
  const int T = spec.horizon;
  const double dt = spec.dt;

  PathSpec east{{{layout.east_start, -kLaneOffset}, {200.0, -kLaneOffset}}, layout.main_speed};
  PathSpec west{{{layout.west_start, kLaneOffset}, {-200.0, kLaneOffset}}, layout.main_speed};

  const double r = layout.turn_radius;
  const Eigen::Vector2d c(kLaneOffset - r, kLaneOffset - r);
  PathSpec turn;
  turn.speed = layout.side_speed;
  turn.points = {{kLaneOffset, layout.side_start}};
  append(turn.points, arc(c, r, 0.0, std::numbers::pi / 2));
  append(turn.points, {{-200.0, kLaneOffset}});

  spec.vehicles.push_back(vehicle_from_path("eastbound", east, T, dt));
  spec.vehicles.push_back(vehicle_from_path("westbound", west, T, dt));
  spec.vehicles.push_back(vehicle_from_path("side-left", turn, T, dt));
  return spec;
}

ScenarioSpec generate_intersection(int vehicles, const IntersectionLayout& layout) {
  if (vehicles < 2 || vehicles > 12) {
    throw ScenarioError("intersection supports 2 to 12 vehicles, got " + std::to_string(vehicles));
  }
  ScenarioSpec spec;
  spec.name = "intersection:" + std::to_string(vehicles);
  const int T = spec.horizon;
  const double dt = spec.dt;

  // Approaches in order W, S, E, N; quarter turns rotate the west approach.
  static const char* kApproach[] = {"W", "S", "E", "N"};

  for (int k = 0; k < vehicles; ++k) {
    const int approach = k % 4;
    const int rank = k / 4;  // 0 straight lead, 1 left, 2 right
    const Movement move = rank == 0 ? Movement::kStraight
                          : rank == 1 ? Movement::kLeft
                                      : Movement::kRight;
    const double start = layout.lead[approach] + layout.gap * rank;
    PathSpec path{rotate(canonical_path(move, start, layout), approach), layout.speed};
    static const char* kMove[] = {"straight", "left", "right"};
    spec.vehicles.push_back(vehicle_from_path(
        std::string(kApproach[approach]) + "-" + kMove[rank], path, T, dt));
  }
  return spec;
}

ScenarioSpec builtin_scenario(const std::string& name) {
  if (name == "t-junction") return generate_t_junction();
  const std::string prefix = "intersection";
  if (name.rfind(prefix, 0) == 0) {
    if (name == prefix) return generate_intersection(12);
    if (name.size() > prefix.size() + 1 && name[prefix.size()] == ':') {
      try {
        std::size_t used = 0;
        const std::string tail = name.substr(prefix.size() + 1);
        const int n = std::stoi(tail, &used);
        if (used == tail.size()) return generate_intersection(n);
      } catch (const std::logic_error&) {
      }
    }
  }
  throw ScenarioError("unknown builtin scenario '" + name +
                      "' (expected t-junction or intersection:N)");
}

HyperParams builtin_hyperparams(const std::string& name) {
  HyperParams hyper;
  if (builtin_scenario(name).name != "t-junction") {
    hyper.sigma = 0.01;
    hyper.rho = 0.001;
    hyper.inner_iters = 3;
  }
  return hyper;
}

json metrics_to_json(const PlanResult& result, const ScenarioSpec& spec,
                     const HyperParams& hyper) {
  json doc;
  doc["solver"] = result.solver;
  doc["scenario"] = spec.name;
  doc["agents"] = spec.agents();
  doc["parameters"] = {{"sigma", hyper.sigma},
                       {"rho", hyper.rho},
                       {"beta", spec.beta},
                       {"d_safe", spec.d_safe},
                       {"inner_iters", hyper.inner_iters},
                       {"outer_tol", hyper.outer_tol},
                       {"max_outer_iters", hyper.max_outer_iters},
                       {"alpha_schedule", hyper.alpha_schedule},
                       {"horizon", spec.horizon},
                       {"dt", spec.dt}};
  doc["final_cost"] = result.final_cost();
  doc["cost_history"] = result.cost_history;
  doc["consensus_variance"] = result.consensus_variance;
  doc["selected_alpha"] = result.selected_alpha;
  doc["min_distance"] = num_to(result.min_distance);
  json mins = json::array();
  for (double d : result.min_distance_per_stage) mins.push_back(num_to(d));
  doc["min_distance_per_stage"] = std::move(mins);
  doc["outer_iterations"] = result.outer_iterations;
  doc["converged"] = result.converged;
  doc["selection_consistent"] = result.selection_consistent;
  doc["wall_seconds"] = result.wall_seconds;
  json timings = json::array();
  for (const auto& t : result.agent_timings) timings.push_back(timings_to(t));
  doc["agent_timings"] = std::move(timings);
  json phases = json::object();
  for (int p = 0; p < kPhaseCount; ++p) {
    const PhaseStats& s = result.exchange.phases[p];
    phases[phase_name(static_cast<Phase>(p))] = {{"rounds", s.rounds},
                                                 {"messages", s.messages},
                                                 {"payload_scalars", s.payload_scalars},
                                                 {"barrier_seconds", s.barrier_seconds}};
  }
  doc["exchange"] = std::move(phases);
  json trajs = json::array();
  for (const auto& tr : result.trajectories) {
    json inputs = json::array();
    for (const auto& u : tr.inputs) inputs.push_back(vec_to(u));
    trajs.push_back({{"states", states_to(tr.states)}, {"inputs", std::move(inputs)}});
  }
  doc["trajectories"] = std::move(trajs);
  return doc;
}

PlanResult metrics_from_json(const json& doc) {
  PlanResult r;
  try {
    r.solver = doc.at("solver").get<std::string>();
    r.cost_history = doc.at("cost_history").get<std::vector<double>>();
    r.consensus_variance = doc.at("consensus_variance").get<std::vector<double>>();
    r.selected_alpha = doc.at("selected_alpha").get<std::vector<int>>();
    r.min_distance = num_from(doc.at("min_distance"));
    for (const json& d : doc.at("min_distance_per_stage")) r.min_distance_per_stage.push_back(num_from(d));
    r.outer_iterations = doc.at("outer_iterations").get<int>();
    r.converged = doc.at("converged").get<bool>();
    r.selection_consistent = doc.at("selection_consistent").get<bool>();
    r.wall_seconds = doc.at("wall_seconds").get<double>();
    for (const json& t : doc.at("agent_timings")) r.agent_timings.push_back(timings_from(t));
    for (int p = 0; p < kPhaseCount; ++p) {
      const json& s = doc.at("exchange").at(phase_name(static_cast<Phase>(p)));
      PhaseStats& out = r.exchange.phases[p];
      out.rounds = s.at("rounds").get<std::uint64_t>();
      out.messages = s.at("messages").get<std::uint64_t>();
      out.payload_scalars = s.at("payload_scalars").get<std::uint64_t>();
      out.barrier_seconds = s.at("barrier_seconds").get<double>();
    }
    for (const json& t : doc.at("trajectories")) {
      Trajectory tr;
      for (const json& x : t.at("states")) tr.states.push_back(vec_from<4>(x, "state"));
      for (const json& u : t.at("inputs")) tr.inputs.push_back(vec_from<2>(u, "input"));
      r.trajectories.push_back(std::move(tr));
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("metrics document: ") + e.what());
  }
  return r;
}

std::string trajectories_csv(const std::vector<Trajectory>& trajectories) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "agent,tau,px,py,theta,v,delta,a\n";
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& tr = trajectories[i];
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      const VehicleState& x = tr.states[t];
      os << i << ',' << t << ',' << x[kPx] << ',' << x[kPy] << ',' << x[kTheta] << ','
         << x[kSpeed] << ',';
      if (t < tr.inputs.size()) {
        os << tr.inputs[t][kSteer] << ',' << tr.inputs[t][kAccel];
      } else {
        os << ',';  // no input at the final stage
      }
      os << '\n';
    }
  }
  return os.str();
}

std::vector<std::filesystem::path> emit(const PlanResult& result, const ScenarioSpec& spec,
                                        const HyperParams& hyper,
                                        const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error("cannot create " + outdir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = outdir / name;
    write_file(path, content);
    written.push_back(path);
  };

  put("trajectories.csv", trajectories_csv(result.trajectories));
  put("metrics.json", metrics_to_json(result, spec, hyper).dump(1) + "\n");

  const int N = static_cast<int>(result.trajectories.size());
  auto label = [&](int i) {
    return i < spec.agents() && !spec.vehicles[i].label.empty() ? spec.vehicles[i].label
                                                                : "agent " + std::to_string(i);
  };

  {
    svg::Plot plot;
    plot.title = spec.name + ": trajectories (" + result.solver + ")";
    plot.x_label = "x [m]";
    plot.y_label = "y [m]";
    plot.equal_aspect = true;
    for (int i = 0; i < N; ++i) {
      svg::Series s{label(i), {}, {}, false};
      for (const auto& x : result.trajectories[i].states) {
        s.x.push_back(x[kPx]);
        s.y.push_back(x[kPy]);
      }
      plot.series.push_back(std::move(s));
    }
    put("trajectories.svg", svg::render(plot));
  }
  for (int which : {kSteer, kAccel}) {
    svg::Plot plot;
    plot.title = which == kSteer ? "steering angle" : "acceleration";
    plot.x_label = "time [s]";
    plot.y_label = which == kSteer ? "delta [rad]" : "a [m/s^2]";
    plot.hlines = {spec.bounds.lower[which], spec.bounds.upper[which]};
    for (int i = 0; i < N; ++i) {
      svg::Series s{label(i), {}, {}, false};
      const auto& u = result.trajectories[i].inputs;
      for (std::size_t t = 0; t < u.size(); ++t) {
        s.x.push_back(spec.dt * t);
        s.y.push_back(u[t][which]);
      }
      plot.series.push_back(std::move(s));
    }
    put(which == kSteer ? "steering.svg" : "acceleration.svg", svg::render(plot));
  }
  {
    svg::Plot plot;
    plot.title = "minimum centre distance";
    plot.x_label = "time [s]";
    plot.y_label = "distance [m]";
    plot.hlines = {spec.d_safe};
    svg::Series s{"min distance", {}, {}, false};
    for (std::size_t t = 0; t < result.min_distance_per_stage.size(); ++t) {
      s.x.push_back(spec.dt * t);
      s.y.push_back(result.min_distance_per_stage[t]);
    }
    plot.series.push_back(std::move(s));
    put("min_distance.svg", svg::render(plot));
  }
  {
    svg::Plot plot;
    plot.title = "consensus variance of y";
    plot.x_label = "outer iteration";
    plot.y_label = "variance";
    plot.log_y = true;
    svg::Series s{"variance", {}, {}, false};
    for (std::size_t k = 0; k < result.consensus_variance.size(); ++k) {
      s.x.push_back(static_cast<double>(k + 1));
      s.y.push_back(result.consensus_variance[k]);
    }
    plot.series.push_back(std::move(s));
    put("consensus_variance.svg", svg::render(plot));
  }
  return written;
}

}  // namespace dilqr
