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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "netlens/classifier.hpp"
#include "netlens/graph.hpp"

namespace netlens {

enum class Family { kStar, kWheel, kLadder, kRing, kClique, kGrid };

const char* to_string(Family family);
// Throws Error for unknown names.
Family parse_family(const std::string& name);

// Standard graph families on n nodes:
//   star    hub 0 joined to 1..n-1                       n >= 2
//   wheel   hub 0 joined to the cycle 1..n-1             n >= 4
//   ladder  rails 0..k-1 and k..2k-1, rungs i~k+i        n even, n >= 4
//   ring    cycle 0..n-1                                 n >= 3
//   clique  complete graph                               n >= 2
//   grid    a x b lattice, a <= b the most square factorization with a >= 2
// `seed` is reserved for randomized variants; no current family uses it.
Graph generate_family(Family family, int n, std::uint64_t seed = 0);

struct LabeledSubgraph {
  Graph graph;
  int class_index = 0;
  std::int64_t source_id = 0;
  int size_class = 0;
};

struct CorpusExtraction {
  std::vector<LabeledSubgraph> subgraphs;  // ordered by size (as requested), then draw
  std::int64_t requested = 0;
  // Per requested size, how many node-disjoint subgraphs were obtained.
  std::vector<int> achieved;

  bool complete() const {
    return static_cast<std::int64_t>(subgraphs.size()) == requested;
  }
};

// Up to `count` node-disjoint random-walk subgraphs of every size in `sizes`
// from `g`. Larger sizes are placed first; walk starts are drawn uniformly
// from still-unused nodes and used nodes are blocked for all later walks.
// When the graph runs out of room the shortfall is reported through
// `achieved`; subgraphs never overlap. Each subgraph's original_ids hold the
// host node of every member.
CorpusExtraction extract_corpus(const Graph& g, int count, std::span<const int> sizes,
                                std::uint64_t seed, int class_index = 0);

struct HeterogeneousNetwork {
  Graph graph;
  std::vector<int> truth;                  // class index per node
  std::vector<std::int64_t> provenance;    // source part id per node
  std::vector<int> part_size;              // size class per node
  std::vector<Edge> splice_edges;          // random splice edges, in draw order
  std::vector<Edge> connector_edges;       // extra edges that joined leftover components
};

// Disjoint union of `parts` plus extra_per_part * |parts| random splice
// edges: pick two distinct parts uniformly, one node uniformly in each, and
// join them; a draw that repeats an existing edge is redrawn. Components that
// remain afterwards are joined by random cross-component edges, recorded in
// connector_edges. Throws Error with fewer than two parts.
HeterogeneousNetwork splice(std::span<const LabeledSubgraph> parts, int extra_per_part,
                            std::uint64_t seed);

// Per node, the number of distinct classes among the node and its neighbors.
std::vector<int> node_diversity(const HeterogeneousNetwork& h);
std::vector<int> node_diversity(const Graph& g, std::span<const int> truth);

// Ground truth TSV: "node_id<TAB>class_name<TAB>subgraph_id", one line per
// node in id order, no header.
void write_truth_tsv(std::ostream& out, const HeterogeneousNetwork& h,
                     const ClassCatalog& catalog);

struct TruthTable {
  std::vector<int> truth;
  std::vector<std::int64_t> provenance;
};

// Rows may appear in any order but must cover 0..node_count-1 exactly once.
TruthTable read_truth_tsv(std::istream& in, const ClassCatalog& catalog,
                          NodeId node_count);

// `count` walk images of `lens_size` nodes taken from uniformly chosen
// starts in `g`, skipping starts whose walk fails. Overlap is allowed.
// Returns fewer than `count` only if every attempt budget is spent.
std::vector<BitImage> sample_walk_images(const Graph& g, int lens_size, int count,
                                         std::uint64_t seed);

// One copy of generate_family(families[c], s) per class c, size s and copy,
// labeled with class c. Source ids are assigned sequentially.
std::vector<LabeledSubgraph> family_parts(std::span<const Family> families,
                                          std::span<const int> sizes, int copies);

}  // namespace netlens
