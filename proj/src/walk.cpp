// Copyright 2026 The Netlens Authors
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

#include "netlens/walk.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "netlens/error.hpp"

namespace netlens {
namespace {

bool is_blocked(std::span<const std::uint8_t> blocked, NodeId v) {
  return !blocked.empty() && blocked[v] != 0;
}

// True when at least `target` nodes are reachable from `start` through
// unblocked nodes. Stops exploring as soon as the answer is known.
bool reaches_at_least(const Graph& g, NodeId start, int target,
                      std::span<const std::uint8_t> blocked) {
  std::unordered_set<NodeId> seen{start};
  std::vector<NodeId> frontier{start};
  while (!frontier.empty()) {
    const NodeId u = frontier.back();
    frontier.pop_back();
    for (NodeId w : g.neighbors(u)) {
      if (is_blocked(blocked, w) || !seen.insert(w).second) continue;
      if (static_cast<int>(seen.size()) >= target) return true;
      frontier.push_back(w);
    }
  }
  return static_cast<int>(seen.size()) >= target;
}

}  // namespace

const char* to_string(WalkStatus status) {
  switch (status) {
    case WalkStatus::kOk:
      return "ok";
    case WalkStatus::kComponentTooSmall:
      return "component-too-small";
    case WalkStatus::kWalkExhausted:
      return "walk-exhausted";
  }
  return "unknown";
}

WalkResult random_walk_sample(const Graph& g, NodeId start, int target,
                              std::uint64_t seed,
                              std::span<const std::uint8_t> blocked) {
  if (target < 2) throw Error("random walk target must be at least 2");
  if (start < 0 || start >= g.node_count()) {
    throw Error("random walk start " + std::to_string(start) + " out of range");
  }
  if (!blocked.empty() &&
      blocked.size() != static_cast<std::size_t>(g.node_count())) {
    throw Error("blocked mask size does not match node count");
  }
  if (is_blocked(blocked, start)) throw Error("random walk start is blocked");

  WalkResult result;
  result.sample.start = start;
  result.sample.lens_size = target;
  if (g.degree(start) == 0 || !reaches_at_least(g, start, target, blocked)) {
    result.status = WalkStatus::kComponentTooSmall;
    return result;
  }

  auto& members = result.sample.members;
  members.reserve(static_cast<std::size_t>(target));
  members.push_back(start);
  // Lens sizes are small, so a linear scan beats hashing for the usual case.
  std::unordered_set<NodeId> large_seen;
  const bool use_set = target > 128;
  if (use_set) large_seen.insert(start);
  const auto visited = [&](NodeId v) {
    return use_set ? large_seen.count(v) != 0
                   : std::find(members.begin(), members.end(), v) != members.end();
  };

  std::mt19937_64 rng(seed);
  std::vector<NodeId> open;
  NodeId current = start;
  const std::int64_t cap = kWalkStepsPerTarget * target;
  for (std::int64_t step = 0; step < cap; ++step) {
    NodeId next;
    if (blocked.empty()) {
      const auto adj = g.neighbors(current);
      std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
      next = adj[pick(rng)];
    } else {
      open.clear();
      for (NodeId w : g.neighbors(current)) {
        if (!is_blocked(blocked, w)) open.push_back(w);
      }
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      next = open[pick(rng)];
    }
    current = next;
    if (!visited(current)) {
      members.push_back(current);
      if (use_set) large_seen.insert(current);
      if (static_cast<int>(members.size()) == target) return result;
    }
  }
  result.status = WalkStatus::kWalkExhausted;
  return result;
}

}  // namespace netlens
