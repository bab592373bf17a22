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

#include "dilqr/planner.hpp"

#include "dilqr/admm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace dilqr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void throw_if_invalid(const ScenarioSpec& spec, const HyperParams& hyper) {
  auto problems = validate_scenario(spec);
  auto more = validate_hyperparams(hyper);
  problems.insert(problems.end(), more.begin(), more.end());
  if (problems.empty()) return;
  std::ostringstream os;
  os << "invalid problem:";
  for (const auto& p : problems) os << "\n  " << p;
  throw Error(os.str());
}

// One vehicle's share of the decentralized solver. Everything an agent knows
// about its peers arrives through the network as immutable snapshots.
class Agent {
 public:
  Agent(int id, const ScenarioSpec& spec, const HyperParams& hyper, Trajectory initial)
      : id_(id),
        spec_(spec),
        hyper_(hyper),
        dims_(compute_dimensions(spec.agents(), spec.horizon)),
        params_(vehicle_params(spec)),
        weights_(cost_weights(spec)),
        own_(std::move(initial)),
        dual_(dims_.dual) {
    auto zero = std::make_shared<const Eigen::VectorXd>(Eigen::VectorXd::Zero(dims_.dual));
    peer_y_.assign(dims_.agents, zero);
  }

  int id() const { return id_; }
  const Trajectory& trajectory() const { return own_; }
  const Eigen::VectorXd& y() const { return dual_.y; }
  const std::vector<double>& history() const { return history_; }
  const std::vector<double>& variances() const { return variances_; }
  const std::vector<int>& selections() const { return selections_; }
  PhaseTimings& timings() { return timings_; }
  const PhaseTimings& timings() const { return timings_; }
  bool converged() const { return converged_; }

  // Outer-loop start: rebuild the convex model around the current trajectories.
  void relinearize(const PeerPayloads<Trajectory>& peers) {
    const auto start = Clock::now();
    all_.clear();
    all_.reserve(dims_.agents);
    for (int j = 0; j < dims_.agents; ++j) {
      all_.push_back(j == id_ ? own_ : *peers.at(j));
    }
    if (history_.empty()) history_.push_back(total_cost(all_, spec_));

    coupling_ = build_coupling(all_, spec_.beta, spec_.d_safe);
    dyn_ = to_lqr_dynamics(linearize_trajectory(own_, params_));
    host_ = quadratize_host(own_, spec_.vehicles[id_].reference, weights_);
    box_ = make_box_bounds(all_, spec_.bounds);
    dual_.reset_multipliers();
    timings_.relinearize += seconds_since(start);
  }

  void admm_iteration() {
    const auto start = Clock::now();
    const PeerVectors peers = peer_vectors();
    const double sigma = hyper_.sigma, rho = hyper_.rho;

    dual_.p = p_update(dual_.p, dual_.y, peers, rho, dims_.degree);
    dual_.s = s_update(dual_.s, dual_.y, dual_.z, sigma);
    const Eigen::VectorXd r = compute_r(dual_.y, peers, dual_.z, dual_.p, dual_.s, rho, sigma);

    const auto lqr_start = Clock::now();
    const AugmentedStageCosts costs =
        build_augmented_costs(host_, coupling_, id_, r, sigma, rho, dims_);
    gains_ = backward_pass(costs, dyn_);
    const PerturbationTrajectory dX = linear_forward_pass(gains_, dyn_);
    timings_.lqr += seconds_since(lqr_start);
    timings_.lqr_solves += 1;

    dual_.y = y_update(j_apply(coupling_, id_, dX, dims_), r, sigma, rho, dims_.degree);
    z_update(dual_, coupling_.l(), box_, dims_, sigma);
    timings_.admm += seconds_since(start);
  }

  void receive_duals(const PeerPayloads<Eigen::VectorXd>& peers) {
    for (const auto& [j, y] : peers) peer_y_[j] = y;
  }

  void record_variance() {
    PeerVectors ys;
    ys.reserve(dims_.agents);
    for (int j = 0; j < dims_.agents; ++j) {
      ys.push_back(j == id_ ? &dual_.y : peer_y_[j].get());
    }
    variances_.push_back(consensus_variance(ys));
  }

  std::vector<Trajectory> make_candidates() {
    const auto start = Clock::now();
    auto out = candidate_rollouts(own_, gains_, hyper_.alpha_schedule, spec_.bounds,
                                  params_);
    timings_.line_search += seconds_since(start);
    return out;
  }

  // Returns true when the outer loop should stop.
  bool choose(const std::vector<Trajectory>& mine,
              const PeerPayloads<std::vector<Trajectory>>& peers) {
    const auto start = Clock::now();
    std::vector<const std::vector<Trajectory>*> lists;
    lists.reserve(dims_.agents);
    for (int j = 0; j < dims_.agents; ++j) {
      lists.push_back(j == id_ ? &mine : peers.at(j).get());
    }
    const CandidateChoice choice = select_candidate(lists, spec_);
    own_ = mine[choice.index];
    selections_.push_back(choice.index);
    history_.push_back(choice.costs[choice.index]);
    timings_.line_search += seconds_since(start);

    const int updates = static_cast<int>(history_.size()) - 1;
    converged_ = termination_check(history_, hyper_.outer_tol) == Termination::kStop;
    return converged_ || updates >= hyper_.max_outer_iters;
  }

 private:
  PeerVectors peer_vectors() const {
    PeerVectors out;
    out.reserve(dims_.degree);
    for (int j = 0; j < dims_.agents; ++j) {
      if (j != id_) out.push_back(peer_y_[j].get());
    }
    return out;
  }

  const int id_;
  const ScenarioSpec& spec_;
  const HyperParams& hyper_;
  const Dimensions dims_;
  const VehicleParams params_;
  const CostWeights weights_;

  Trajectory own_;
  std::vector<Trajectory> all_;
  DualState dual_;
  std::vector<std::shared_ptr<const Eigen::VectorXd>> peer_y_;

  CouplingModel coupling_;
  LqrDynamics dyn_;
  StageQuadratics host_;
  BoxBounds box_;
  GainSchedule gains_;

  std::vector<double> history_;
  std::vector<double> variances_;
  std::vector<int> selections_;
  bool converged_ = false;
  PhaseTimings timings_;
};

// Drives a subset of agents through the protocol. Every phase posts for all
// owned agents before collecting for any, so any split of agents over
// threads is deadlock free.
void run_worker(const std::vector<Agent*>& owned, Network& net, const HyperParams& hyper) {
  auto timed = [](Agent* a, auto&& fn) {
    const auto start = Clock::now();
    auto out = fn();
    a->timings().exchange += seconds_since(start);
    return out;
  };

  for (int outer = 0;; ++outer) {
    const RoundTag traj_tag{outer, 0, Phase::kTrajectory};
    for (Agent* a : owned) {
      timed(a, [&] { net.post(a->id(), traj_tag, a->trajectory()); return 0; });
    }
    for (Agent* a : owned) {
      auto peers = timed(a, [&] { return net.collect<Trajectory>(a->id(), traj_tag); });
      a->relinearize(peers);
    }

    for (int k = 0; k < hyper.inner_iters; ++k) {
      const RoundTag dual_tag{outer, k, Phase::kDual};
      for (Agent* a : owned) {
        a->admm_iteration();
        timed(a, [&] { net.post(a->id(), dual_tag, a->y()); return 0; });
      }
      for (Agent* a : owned) {
        a->receive_duals(
            timed(a, [&] { return net.collect<Eigen::VectorXd>(a->id(), dual_tag); }));
      }
    }
    for (Agent* a : owned) a->record_variance();

    const RoundTag cand_tag{outer, 0, Phase::kCandidates};
    std::vector<std::vector<Trajectory>> mine(owned.size());
    for (std::size_t n = 0; n < owned.size(); ++n) {
      Agent* a = owned[n];
      mine[n] = a->make_candidates();
      timed(a, [&] { net.post(a->id(), cand_tag, mine[n]); return 0; });
    }
    bool stop = false;
    for (std::size_t n = 0; n < owned.size(); ++n) {
      Agent* a = owned[n];
      auto peers = timed(
          a, [&] { return net.collect<std::vector<Trajectory>>(a->id(), cand_tag); });
      stop = a->choose(mine[n], peers);
    }
    if (stop) return;
  }
}

}  // namespace

double PlanResult::mean_lqr_seconds() const {
  double total = 0.0;
  long solves = 0;
  for (const auto& t : agent_timings) {
    total += t.lqr;
    solves += t.lqr_solves;
  }
  return solves > 0 ? total / static_cast<double>(solves) : 0.0;
}

double PlanResult::parallel_compute_seconds() const {
  double worst = 0.0;
  for (const auto& t : agent_timings) worst = std::max(worst, t.compute());
  return worst;
}

std::vector<Trajectory> initial_trajectories(const ScenarioSpec& spec) {
  const VehicleParams params = vehicle_params(spec);
  const std::vector<ControlInput> zeros(spec.horizon,
                                        spec.bounds.clip(ControlInput::Zero()));
  std::vector<Trajectory> out;
  out.reserve(spec.vehicles.size());
  for (const auto& v : spec.vehicles) {
    out.push_back(rollout(v.initial, zeros, params).trajectory);
  }
  return out;
}

Trajectory feasible_rollout(const Trajectory& nominal, const GainSchedule& gains,
                            double alpha, const InputBounds& bounds,
                            const VehicleParams& params) {
  const int T = nominal.horizon();
  Trajectory out;
  out.states.resize(T + 1);
  out.inputs.resize(T);
  out.states[0] = nominal.states[0];
  for (int t = 0; t < T; ++t) {
    const VehicleState dx = out.states[t] - nominal.states[t];
    const ControlInput du = alpha * gains.k[t] + gains.K[t] * dx;
    out.inputs[t] = bounds.clip(nominal.inputs[t] + du);
    out.states[t + 1] = step(out.states[t], out.inputs[t], params).next;
  }
  return out;
}

std::vector<Trajectory> candidate_rollouts(const Trajectory& nominal,
                                           const GainSchedule& gains,
                                           std::span<const double> alphas,
                                           const InputBounds& bounds,
                                           const VehicleParams& params) {
  std::vector<Trajectory> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    out.push_back(feasible_rollout(nominal, gains, alpha, bounds, params));
  }
  return out;
}

CandidateChoice select_candidate(const std::vector<const std::vector<Trajectory>*>& lists,
                                 const ScenarioSpec& spec) {
  CandidateChoice choice;
  const std::size_t count = lists.empty() ? 0 : lists.front()->size();
  choice.costs.resize(count);
  std::vector<Trajectory> joint(lists.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t j = 0; j < lists.size(); ++j) joint[j] = (*lists[j])[a];
    choice.costs[a] = total_cost(joint, spec);
    // Strict comparison keeps the earliest (largest alpha) index on ties.
    if (choice.costs[a] < best) {
      best = choice.costs[a];
      choice.index = static_cast<int>(a);
    }
  }
  return choice;
}

FeasibleUpdate feasible_update(std::span<const Trajectory> current,
                               std::span<const GainSchedule> gains,
                               std::span<const double> alphas, const ScenarioSpec& spec) {
  const VehicleParams params = vehicle_params(spec);
  std::vector<std::vector<Trajectory>> candidates;
  candidates.reserve(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    candidates.push_back(
        candidate_rollouts(current[i], gains[i], alphas, spec.bounds, params));
  }
  std::vector<const std::vector<Trajectory>*> lists;
  for (const auto& c : candidates) lists.push_back(&c);
  FeasibleUpdate out;
  out.choice = select_candidate(lists, spec);
  for (auto& c : candidates) out.trajectories.push_back(std::move(c[out.choice.index]));
  return out;
}

Termination termination_check(const std::vector<double>& history, double tol,
                              int max_iters) {
  if (history.empty()) return Termination::kContinue;
  const int updates = static_cast<int>(history.size()) - 1;
  if (max_iters >= 0 && updates >= max_iters) return Termination::kStop;
  if (updates < 1) return Termination::kContinue;
  const double change = std::abs(history[updates] - history[updates - 1]);
  return change < tol ? Termination::kStop : Termination::kContinue;
}

PlanResult plan_decentralized(const ScenarioSpec& spec, const HyperParams& hyper,
                              const PlanOptions& options) {
  throw_if_invalid(spec, hyper);
  const auto start = Clock::now();
  const int N = spec.agents();

  std::vector<Trajectory> init = initial_trajectories(spec);
  std::vector<std::unique_ptr<Agent>> agents;
  agents.reserve(N);
  for (int i = 0; i < N; ++i) {
    agents.push_back(std::make_unique<Agent>(i, spec, hyper, std::move(init[i])));
  }

  Network net(N, options.timeout);
  const int workers = std::clamp(options.threads > 0 ? options.threads : N, 1, N);
  std::vector<std::vector<Agent*>> owned(workers);
  for (int i = 0; i < N; ++i) owned[i % workers].push_back(agents[i].get());

  std::mutex error_mutex;
  std::exception_ptr first_error;
  bool first_is_net = true;
  auto guarded = [&](const std::vector<Agent*>& mine) {
    try {
      run_worker(mine, net, hyper);
    } catch (const std::exception& e) {
      const bool is_net = dynamic_cast<const NetError*>(&e) != nullptr;
      std::ostringstream os;
      os << "decentralized planner, worker owning agent " << mine.front()->id() << ": "
         << e.what();
      {
        std::lock_guard lock(error_mutex);
        // Prefer the root cause over the aborts it triggers in other workers.
        if (!first_error || (first_is_net && !is_net)) {
          first_error = std::make_exception_ptr(Error(os.str()));
          first_is_net = is_net;
        }
      }
      net.abort(os.str());
    }
  };

  if (workers == 1) {
    guarded(owned[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(guarded, std::cref(owned[w]));
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  PlanResult result;
  result.solver = "decentralized";
  const Agent& lead = *agents.front();
  for (const auto& a : agents) {
    result.trajectories.push_back(a->trajectory());
    result.agent_timings.push_back(a->timings());
    if (a->selections() != lead.selections() || a->history() != lead.history()) {
      result.selection_consistent = false;
    }
  }
  result.cost_history = lead.history();
  result.consensus_variance = lead.variances();
  result.selected_alpha = lead.selections();
  result.outer_iterations = static_cast<int>(lead.selections().size());
  result.converged = lead.converged();
  result.min_distance_per_stage = min_distance_per_stage(result.trajectories);
  result.min_distance =
      result.min_distance_per_stage.empty()
          ? std::numeric_limits<double>::infinity()
          : *std::min_element(result.min_distance_per_stage.begin(),
                              result.min_distance_per_stage.end());
  result.exchange = net.stats();
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace dilqr
