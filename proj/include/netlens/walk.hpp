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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netlens/graph.hpp"

namespace netlens {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-walk seed: each component is folded in through a SplitMix64 round, so
// the result depends only on (master, node, lens size, repeat) and never on
// scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t node,
                                 std::uint64_t lens_size,
                                 std::uint64_t repeat = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ node);
  h = splitmix64(h ^ (lens_size << 32));
  return splitmix64(h ^ repeat);
}

enum class WalkStatus {
  kOk,
  kComponentTooSmall,  // fewer than `target` reachable nodes
  kWalkExhausted,      // step cap hit before collecting `target` nodes
};

const char* to_string(WalkStatus status);

struct WalkSample {
  NodeId start = 0;
  int lens_size = 0;
  // Distinct visited nodes in first-visit order; members.front() == start.
  std::vector<NodeId> members;
};

struct WalkResult {
  WalkStatus status = WalkStatus::kOk;
  WalkSample sample;

  bool ok() const { return status == WalkStatus::kOk; }
};

// Steps allowed per requested node before a walk gives up.
inline constexpr std::int64_t kWalkStepsPerTarget = 1000;

// Simple random walk from `start`, moving to a uniformly chosen neighbor at
// every step, until `target` distinct nodes have been visited. Nodes flagged
// nonzero in `blocked` (when given, sized node_count) are never entered.
// Deterministic given the seed. Throws Error if target < 2 or start is
// out of range or blocked.
WalkResult random_walk_sample(const Graph& g, NodeId start, int target,
                              std::uint64_t seed,
                              std::span<const std::uint8_t> blocked = {});

}  // namespace netlens
