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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "netlens/embedding.hpp"
#include "netlens/error.hpp"
#include "netlens/testbed.hpp"
#include "oracles/random_graphs.hpp"

namespace netlens {
namespace {

BitImage parse_pbm(const std::string& text) {
  std::istringstream in(text);
  return read_pbm(in);
}

TEST(CanonicalOrder, StarHubFirst) {
  for (int hub = 0; hub < 4; ++hub) {
    std::vector<Edge> edges;
    for (int v = 0; v < 4; ++v) {
      if (v != hub) edges.emplace_back(hub, v);
    }
    const Graph star = Graph::from_edges(4, edges);
    EXPECT_EQ(canonical_order(star).front(), hub);
  }
}

TEST(CanonicalOrder, IsPermutation) {
  const Graph g = testing_graphs::random_connected(40, 25, 8);
  auto order = canonical_order(g);
  std::sort(order.begin(), order.end());
  for (int i = 0; i < 40; ++i) EXPECT_EQ(order[i], i);
  EXPECT_THROW(canonical_order(Graph{}), Error);
}

TEST(EmbedImage, SmallCases) {
  const Graph k2 = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
  BitImage::Bits expect(2, 2);
  expect << 0, 1, 1, 0;
  EXPECT_EQ(embed_image(k2).bits(), expect);

  const Graph k3 = generate_family(Family::kClique, 3);
  BitImage::Bits black = BitImage::Bits::Ones(3, 3);
  black.diagonal().setZero();
  EXPECT_EQ(embed_image(k3).bits(), black);

  const Graph empty = Graph::from_edges(3, std::vector<Edge>{});
  EXPECT_EQ(embed_image(empty).bits(), BitImage::Bits::Zero(3, 3));
}

TEST(EmbedImage, StarHubRow) {
  const Graph star = Graph::from_edges(4, std::vector<Edge>{{2, 0}, {2, 1}, {2, 3}});
  const auto img = embed_image(star);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool hub_line = (i == 0) != (j == 0);
      EXPECT_EQ(img(i, j), hub_line) << i << "," << j;
    }
  }
}

TEST(EmbedImage, MatchesImageUnderOrder) {
  const Graph g = testing_graphs::random_connected(20, 10, 4);
  EXPECT_EQ(embed_image(g), image_under_order(g, canonical_order(g)));
}

TEST(BitImage, ValidatingConstructor) {
  BitImage::Bits asym = BitImage::Bits::Zero(2, 2);
  asym(0, 1) = 1;
  EXPECT_THROW(BitImage{asym}, Error);
  BitImage::Bits loop = BitImage::Bits::Zero(2, 2);
  loop(1, 1) = 1;
  EXPECT_THROW(BitImage{loop}, Error);
  BitImage::Bits two = BitImage::Bits::Zero(2, 2);
  two(0, 1) = two(1, 0) = 2;
  EXPECT_THROW(BitImage{two}, Error);
  EXPECT_THROW(BitImage{BitImage::Bits::Zero(2, 3)}, Error);
}

TEST(Pbm, GoldenOutput) {
  const Graph k2 = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(write_pbm(embed_image(k2)), "P1\n2 2\n0 1\n1 0\n");
  const Graph one = Graph::from_edges(1, std::vector<Edge>{});
  EXPECT_EQ(write_pbm(embed_image(one)), "P1\n1 1\n0\n");
}

TEST(Pbm, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto img = embed_image(testing_graphs::random_gnp(17, 0.3, seed));
    EXPECT_EQ(parse_pbm(write_pbm(img)), img);
  }
}

TEST(Pbm, ReaderAcceptsCommentsAndPackedDigits) {
  const auto img = parse_pbm("P1\n# made by hand\n3 3\n010\n101 010\n");
  EXPECT_EQ(img.size(), 3);
  EXPECT_TRUE(img(0, 1));
  EXPECT_TRUE(img(1, 2));
  EXPECT_FALSE(img(0, 2));
}

TEST(Pbm, ReaderRejectsBadInput) {
  EXPECT_THROW(parse_pbm("P4\n2 2\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_pbm("P1\n2 3\n0 1\n1 0\n0 0\n"), Error);
  EXPECT_THROW(parse_pbm("P1\n2 2\n0 1\n1\n"), ParseError);
  EXPECT_THROW(parse_pbm("P1\n2 2\n0 1\n0 0\n"), Error);
}

TEST(EmbeddingProperty, RelabelingInvariance) {
  int pairs = 0, identical = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 8 << (seed % 3);
    const Graph g = seed % 2 ? testing_graphs::random_connected(n, n / 2, seed)
                             : testing_graphs::random_gnp(n, 0.2, seed);
    const auto base = embed_image(g);
    for (std::uint64_t r = 0; r < 10; ++r) {
      const auto perm = testing_graphs::random_permutation(n, seed * 1000 + r);
      ++pairs;
      identical += embed_image(testing_graphs::relabel(g, perm)) == base;
    }
  }
  EXPECT_EQ(identical, pairs);
}

TEST(EmbeddingProperty, FamiliesAreInvariant) {
  for (auto family : {Family::kStar, Family::kWheel, Family::kLadder, Family::kRing,
                      Family::kClique, Family::kGrid}) {
    for (int n : {8, 16, 32, 64}) {
      const Graph g = generate_family(family, n);
      const auto base = embed_image(g);
      for (std::uint64_t r = 0; r < 5; ++r) {
        const auto perm = testing_graphs::random_permutation(n, r + 100);
        EXPECT_EQ(embed_image(testing_graphs::relabel(g, perm)), base)
            << to_string(family) << " " << n;
      }
    }
  }
}

TEST(EmbeddingProperty, PopcountIsTwiceEdges) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph g = testing_graphs::random_gnp(24, 0.25, seed);
    EXPECT_EQ(embed_image(g).popcount(), 2 * g.edge_count());
  }
}

TEST(EmbeddingProperty, ImageDescribesAnIsomorphicGraph) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = testing_graphs::random_gnp(6, 0.45, seed);
    const auto img = embed_image(g);
    std::vector<Edge> edges;
    for (int i = 0; i < img.size(); ++i) {
      for (int j = i + 1; j < img.size(); ++j) {
        if (img(i, j)) edges.emplace_back(i, j);
      }
    }
    EXPECT_TRUE(testing_graphs::isomorphic(g, Graph::from_edges(img.size(), edges)));
  }
}

TEST(EmbeddingProperty, SeparatesNonIsomorphicGraphs) {
  // Every graph on five nodes: equal images must mean isomorphic graphs.
  const std::vector<Edge> slots{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2},
                                {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  std::set<std::string> classes;
  for (int mask = 0; mask < (1 << 10); ++mask) {
    std::vector<Edge> edges;
    for (int b = 0; b < 10; ++b) {
      if (mask >> b & 1) edges.push_back(slots[b]);
    }
    classes.insert(write_pbm(embed_image(Graph::from_edges(5, edges))));
  }
  EXPECT_EQ(classes.size(), 34u);  // graphs on five unlabeled nodes
}

TEST(EmbeddingProperty, Deterministic) {
  const Graph g = testing_graphs::random_connected(64, 64, 12);
  EXPECT_EQ(write_pbm(embed_image(g)), write_pbm(embed_image(g)));
}

}  // namespace
}  // namespace netlens
