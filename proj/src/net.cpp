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

#include "dilqr/net.hpp"

#include <sstream>

namespace dilqr {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::kTrajectory:
      return "trajectory-exchange";
    case Phase::kDual:
      return "dual-exchange";
    case Phase::kCandidates:
      return "candidate-exchange";
  }
  return "unknown";
}

std::string to_string(const RoundTag& tag) {
  std::ostringstream os;
  os << phase_name(tag.phase) << "[outer=" << tag.outer << ", inner=" << tag.inner << "]";
  return os.str();
}

std::uint64_t ExchangeStats::total_messages() const {
  std::uint64_t n = 0;
  for (const auto& p : phases) n += p.messages;
  return n;
}

Network::Network(int agents, std::chrono::milliseconds timeout)
    : agents_(agents), timeout_(timeout) {
  if (agents < 1) throw NetError("Network: need at least one agent");
}

void Network::check_agent(int agent) const {
  if (agent < 0 || agent >= agents_) {
    std::ostringstream os;
    os << "Network: agent id " << agent << " outside [0, " << agents_ << ")";
    throw NetError(os.str());
  }
}

void Network::post_erased(int agent, const RoundTag& tag,
                          std::shared_ptr<const void> payload, std::type_index type,
                          std::size_t scalars) {
  check_agent(agent);
  std::unique_lock lock(mutex_);
  if (aborted_) throw NetError("Network aborted: " + abort_reason_);
  if (finished_.count({agent, tag})) {
    std::ostringstream os;
    os << "protocol error: agent " << agent << " reused finished round " << to_string(tag);
    throw NetError(os.str());
  }
  auto [it, fresh] = rounds_.try_emplace(tag);
  Round& round = it->second;
  if (fresh) {
    round.slots.resize(agents_);
    round.collected.assign(agents_, false);
    round.type = type;
    round.remaining = agents_;
  }
  if (round.slots[agent]) {
    std::ostringstream os;
    os << "protocol error: agent " << agent << " posted twice in " << to_string(tag);
    throw NetError(os.str());
  }
  if (round.type != type) {
    std::ostringstream os;
    os << "protocol error: payload type mismatch in " << to_string(tag);
    throw NetError(os.str());
  }
  round.slots[agent] = std::move(payload);
  round.scalars += scalars;
  if (++round.posted == agents_) {
    PhaseStats& ps = stats_[tag.phase];
    ps.rounds += 1;
    ps.messages += static_cast<std::uint64_t>(agents_) * (agents_ - 1);
    ps.payload_scalars += round.scalars * (agents_ - 1);
    lock.unlock();
    cv_.notify_all();
  }
}

std::vector<std::shared_ptr<const void>> Network::collect_erased(int agent,
                                                                 const RoundTag& tag,
                                                                 std::type_index type) {
  check_agent(agent);
  const auto start = Clock::now();
  std::unique_lock lock(mutex_);
  auto it = rounds_.find(tag);
  if (it == rounds_.end() || !it->second.slots[agent]) {
    std::ostringstream os;
    os << "protocol error: agent " << agent << " collects " << to_string(tag)
       << " without posting";
    throw NetError(os.str());
  }
  if (it->second.type != type) {
    throw NetError("protocol error: payload type mismatch in " + to_string(tag));
  }
  if (it->second.collected[agent]) {
    std::ostringstream os;
    os << "protocol error: agent " << agent << " collected " << to_string(tag) << " twice";
    throw NetError(os.str());
  }

  const auto deadline = start + timeout_;
  const bool complete = cv_.wait_until(lock, deadline, [&] {
    return aborted_ || rounds_.at(tag).posted == agents_;
  });
  if (aborted_) throw NetError("Network aborted: " + abort_reason_);
  Round& round = rounds_.at(tag);
  if (!complete) {
    std::ostringstream os;
    os << "timeout in " << to_string(tag) << " after " << timeout_.count()
       << " ms; missing agents:";
    for (int j = 0; j < agents_; ++j) {
      if (!round.slots[j]) os << ' ' << j;
    }
    const std::string msg = os.str();
    aborted_ = true;
    abort_reason_ = msg;
    lock.unlock();
    cv_.notify_all();
    throw NetError(msg);
  }

  std::vector<std::shared_ptr<const void>> slots = round.slots;
  round.collected[agent] = true;
  finished_.insert({agent, tag});
  if (--round.remaining == 0) rounds_.erase(tag);
  stats_[tag.phase].barrier_seconds +=
      std::chrono::duration<double>(Clock::now() - start).count();
  return slots;
}

void Network::abort(const std::string& reason) {
  {
    std::lock_guard lock(mutex_);
    if (aborted_) return;
    aborted_ = true;
    abort_reason_ = reason;
  }
  cv_.notify_all();
}

ExchangeStats Network::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

void Network::reset_stats() {
  std::lock_guard lock(mutex_);
  stats_ = ExchangeStats{};
}

}  // namespace dilqr
