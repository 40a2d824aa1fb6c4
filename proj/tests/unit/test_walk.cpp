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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "netlens/error.hpp"
#include "netlens/graph.hpp"
#include "netlens/testbed.hpp"
#include "netlens/walk.hpp"
#include "oracles/random_graphs.hpp"
#include "oracles/walk_oracle.hpp"

namespace netlens {
namespace {

std::vector<int> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return {v.begin(), v.end()};
}

TEST(RandomWalk, ForcedPath) {
  const Graph path = generate_family(Family::kRing, 5);  // ring, then cut one edge
  std::vector<Edge> edges;
  for (auto e : path.edges()) {
    if (!(e.first == 0 && e.second == 4)) edges.push_back(e);
  }
  const Graph g = Graph::from_edges(5, edges);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = random_walk_sample(g, 0, 5, seed);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.sample.members, (std::vector<NodeId>{0, 1, 2, 3, 4}));
  }
}

TEST(RandomWalk, ComponentTooSmall) {
  const Graph k2 = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(random_walk_sample(k2, 0, 3, 1).status, WalkStatus::kComponentTooSmall);
  const Graph lonely = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(random_walk_sample(lonely, 2, 2, 1).status, WalkStatus::kComponentTooSmall);
}

TEST(RandomWalk, StarHubMatchesExhaustiveExploration) {
  const Graph star = generate_family(Family::kStar, 9);  // hub 0 + 8 leaves
  const auto finals =
      oracle::reachable_member_sets(testing_graphs::adjacency(star), 0, 4);
  EXPECT_EQ(finals.size(), 56u);  // hub with any 3 of 8 leaves
  for (const auto& set : finals) EXPECT_EQ(set.front(), 0);

  std::set<std::vector<int>> observed;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto r = random_walk_sample(star, 0, 4, seed);
    ASSERT_TRUE(r.ok());
    const auto members = sorted(r.sample.members);
    EXPECT_TRUE(finals.count(members)) << "seed " << seed;
    observed.insert(members);
    const Graph sub = induced_subgraph(star, r.sample.members);
    EXPECT_EQ(sub.edge_count(), 3);
    EXPECT_EQ(sub.degree(0), 3);
  }
  EXPECT_GT(observed.size(), 40u);
}

TEST(RandomWalk, RingSegmentMatchesExploration) {
  const Graph ring = generate_family(Family::kRing, 16);
  const auto finals =
      oracle::reachable_member_sets(testing_graphs::adjacency(ring), 0, 8);
  EXPECT_EQ(finals.size(), 8u);  // arcs of 8 consecutive nodes through 0
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = random_walk_sample(ring, 0, 8, seed);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(finals.count(sorted(r.sample.members)));
  }
}

TEST(RandomWalk, Reproducible) {
  const Graph g = testing_graphs::random_connected(200, 150, 5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto a = random_walk_sample(g, static_cast<NodeId>(seed), 32, seed * 7 + 1);
    const auto b = random_walk_sample(g, static_cast<NodeId>(seed), 32, seed * 7 + 1);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.sample.members, b.sample.members);
  }
}

TEST(RandomWalk, MembersInduceConnectedSubgraph) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Graph g = testing_graphs::random_connected(120, 40, seed);
    for (int target : {2, 8, 16, 32, 64}) {
      const auto r = random_walk_sample(g, static_cast<NodeId>(seed % 120), target, seed + 99);
      ASSERT_TRUE(r.ok());
      EXPECT_EQ(static_cast<int>(r.sample.members.size()), target);
      EXPECT_EQ(r.sample.members.front(), r.sample.start);
      std::set<NodeId> unique(r.sample.members.begin(), r.sample.members.end());
      EXPECT_EQ(unique.size(), r.sample.members.size());
      EXPECT_TRUE(is_connected(induced_subgraph(g, r.sample.members)));
    }
  }
}

TEST(RandomWalk, BlockedNodesAreAvoided) {
  const Graph ring = generate_family(Family::kRing, 12);
  std::vector<std::uint8_t> blocked(12, 0);
  blocked[3] = 1;
  blocked[9] = 1;
  // Node 0 can reach 10, 11, 0, 1, 2 only.
  EXPECT_EQ(random_walk_sample(ring, 0, 6, 1, blocked).status, WalkStatus::kComponentTooSmall);
  const auto r = random_walk_sample(ring, 0, 5, 1, blocked);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(sorted(r.sample.members), (std::vector<int>{0, 1, 2, 10, 11}));
  EXPECT_THROW(random_walk_sample(ring, 3, 2, 1, blocked), Error);
}

TEST(RandomWalk, RejectsBadArguments) {
  const Graph ring = generate_family(Family::kRing, 6);
  EXPECT_THROW(random_walk_sample(ring, 0, 1, 1), Error);
  EXPECT_THROW(random_walk_sample(ring, 6, 3, 1), Error);
}

TEST(SeedMixing, SeparatesNodesSizesAndRepeats) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t node = 0; node < 100; ++node) {
    for (std::uint64_t size : {8, 16, 32, 64}) {
      for (std::uint64_t rep = 0; rep < 3; ++rep) seen.insert(mix_seed(42, node, size, rep));
    }
  }
  EXPECT_EQ(seen.size(), 1200u);
  EXPECT_EQ(mix_seed(1, 2, 3), mix_seed(1, 2, 3));
  EXPECT_NE(mix_seed(1, 2, 3), mix_seed(2, 2, 3));
}

}  // namespace
}  // namespace netlens
