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

// In-process stand-in for vehicle-to-vehicle broadcast on a complete graph.
//
// A round is identified by a RoundTag. Every agent contributes exactly one
// payload per round and receives the payloads of all N - 1 peers. Nothing is
// delivered until the round is complete, so a round acts as a barrier.
// Payloads are frozen into shared immutable snapshots when posted.
//
// broadcast_gather() is post() followed by collect(). The split form lets one
// worker thread drive several agents: post for all of them first, then collect.

#pragma once

#include "dilqr/model.hpp"

#include <Eigen/Core>

#include <array>
#include <chrono>
#include <compare>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <typeindex>
#include <vector>

namespace dilqr {

enum class Phase : int { kTrajectory = 0, kDual = 1, kCandidates = 2 };
inline constexpr int kPhaseCount = 3;

const char* phase_name(Phase phase);

struct RoundTag {
  int outer = 0;
  int inner = 0;
  Phase phase = Phase::kTrajectory;

  auto operator<=>(const RoundTag&) const = default;
};

std::string to_string(const RoundTag& tag);

struct PhaseStats {
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t payload_scalars = 0;
  double barrier_seconds = 0.0;  // summed over agents
};

struct ExchangeStats {
  std::array<PhaseStats, kPhaseCount> phases{};

  const PhaseStats& operator[](Phase p) const { return phases[static_cast<int>(p)]; }
  PhaseStats& operator[](Phase p) { return phases[static_cast<int>(p)]; }
  std::uint64_t total_messages() const;
};

class NetError : public Error {
 public:
  using Error::Error;
};

inline std::size_t payload_scalars(const Eigen::VectorXd& v) {
  return static_cast<std::size_t>(v.size());
}
inline std::size_t payload_scalars(const Trajectory& t) {
  return t.states.size() * kStateDim + t.inputs.size() * kInputDim;
}
inline std::size_t payload_scalars(const std::vector<Trajectory>& list) {
  std::size_t n = 0;
  for (const auto& t : list) n += payload_scalars(t);
  return n;
}

template <class Payload>
using PeerPayloads = std::map<int, std::shared_ptr<const Payload>>;

class Network {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Network(int agents,
                   std::chrono::milliseconds timeout = std::chrono::seconds(30));

  int agents() const { return agents_; }

  template <class Payload>
  void post(int agent, const RoundTag& tag, Payload payload) {
    const std::size_t scalars = payload_scalars(payload);
    post_erased(agent, tag, std::make_shared<const Payload>(std::move(payload)),
                std::type_index(typeid(Payload)), scalars);
  }

  template <class Payload>
  PeerPayloads<Payload> collect(int agent, const RoundTag& tag) {
    std::vector<std::shared_ptr<const void>> slots =
        collect_erased(agent, tag, std::type_index(typeid(Payload)));
    PeerPayloads<Payload> out;
    for (int j = 0; j < agents_; ++j) {
      if (j == agent) continue;
      out.emplace(j, std::static_pointer_cast<const Payload>(slots[j]));
    }
    return out;
  }

  template <class Payload>
  PeerPayloads<Payload> broadcast_gather(int agent, const RoundTag& tag,
                                         Payload payload) {
    post(agent, tag, std::move(payload));
    return collect<Payload>(agent, tag);
  }

  // Wakes every waiting agent; all later calls throw NetError(reason).
  void abort(const std::string& reason);

  ExchangeStats stats() const;
  void reset_stats();

 private:
  struct Round {
    std::vector<std::shared_ptr<const void>> slots;
    std::vector<bool> collected;
    std::type_index type = std::type_index(typeid(void));
    int posted = 0;
    int remaining = 0;  // agents that still have to collect
    std::size_t scalars = 0;
  };

  void post_erased(int agent, const RoundTag& tag, std::shared_ptr<const void> payload,
                   std::type_index type, std::size_t scalars);
  std::vector<std::shared_ptr<const void>> collect_erased(int agent, const RoundTag& tag,
                                                          std::type_index type);
  void check_agent(int agent) const;

  const int agents_;
  const std::chrono::milliseconds timeout_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<RoundTag, Round> rounds_;
  std::set<std::pair<int, RoundTag>> finished_;  // (agent, tag) already collected
  ExchangeStats stats_;
  std::string abort_reason_;
  bool aborted_ = false;
};

}  // namespace dilqr
