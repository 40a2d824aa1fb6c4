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

#include "netlens/testbed.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "netlens/embedding.hpp"
#include "netlens/error.hpp"
#include "netlens/walk.hpp"

namespace netlens {
namespace {

void require_n(bool ok, Family family, int n, const char* rule) {
  if (!ok) {
    throw Error(std::string(to_string(family)) + " graph needs " + rule + ", got n = " +
                std::to_string(n));
  }
}

// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }
  NodeId find(NodeId x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<NodeId> parent_;
};

template <typename Rng>
std::size_t uniform_index(Rng& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

}  // namespace

const char* to_string(Family family) {
  switch (family) {
    case Family::kStar:
      return "star";
    case Family::kWheel:
      return "wheel";
    case Family::kLadder:
      return "ladder";
    case Family::kRing:
      return "ring";
    case Family::kClique:
      return "clique";
    case Family::kGrid:
      return "grid";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::kStar, Family::kWheel, Family::kLadder, Family::kRing,
                   Family::kClique, Family::kGrid}) {
    if (name == to_string(f)) return f;
  }
  throw Error("unknown graph family '" + name + "'");
}

Graph generate_family(Family family, int n, std::uint64_t /*seed*/) {
  std::vector<Edge> edges;
  switch (family) {
    case Family::kStar:
      require_n(n >= 2, family, n, "n >= 2");
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
      break;
    case Family::kWheel:
      require_n(n >= 4, family, n, "n >= 4");
      for (NodeId v = 1; v < n; ++v) {
        edges.emplace_back(0, v);
        edges.emplace_back(v, v + 1 < n ? v + 1 : 1);
      }
      break;
    case Family::kLadder: {
      require_n(n >= 4 && n % 2 == 0, family, n, "an even n >= 4");
      const NodeId k = n / 2;
      for (NodeId i = 0; i < k; ++i) {
        edges.emplace_back(i, k + i);
        if (i + 1 < k) {
          edges.emplace_back(i, i + 1);
          edges.emplace_back(k + i, k + i + 1);
        }
      }
      break;
    }
    case Family::kRing:
      require_n(n >= 3, family, n, "n >= 3");
      for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
      break;
    case Family::kClique:
      require_n(n >= 2, family, n, "n >= 2");
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
      }
      break;
    case Family::kGrid: {
      int rows = 0;
      for (int a = 2; a * a <= n; ++a) {
        if (n % a == 0) rows = a;
      }
      require_n(rows >= 2, family, n, "a composite n = a * b with a, b >= 2");
      const int cols = n / rows;
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const NodeId v = r * cols + c;
          if (c + 1 < cols) edges.emplace_back(v, v + 1);
          if (r + 1 < rows) edges.emplace_back(v, v + cols);
        }
      }
      break;
    }
  }
  return Graph::from_edges(n, edges);
}

CorpusExtraction extract_corpus(const Graph& g, int count, std::span<const int> sizes,
                                std::uint64_t seed, int class_index) {
  if (count < 0) throw Error("corpus count must be nonnegative");
  for (int s : sizes) {
    if (s < 2) throw Error("corpus subgraph sizes must be at least 2");
  }
  const NodeId n = g.node_count();
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(n), 0);

  std::vector<std::size_t> placement(sizes.size());
  std::iota(placement.begin(), placement.end(), std::size_t{0});
  std::stable_sort(placement.begin(), placement.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });

  std::vector<std::vector<LabeledSubgraph>> by_size(sizes.size());
  std::int64_t next_id = 0;
  std::vector<NodeId> candidates;
  for (const std::size_t si : placement) {
    const int size = sizes[si];
    // A start that fails for this size keeps failing: blocking only shrinks
    // its reachable set.
    candidates.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (!blocked[v]) candidates.push_back(v);
    }
    for (int k = 0; k < count; ++k) {
      bool placed = false;
      while (!candidates.empty() && !placed) {
        const auto i = uniform_index(rng, candidates.size());
        const NodeId start = candidates[i];
        candidates[i] = candidates.back();
        candidates.pop_back();
        if (blocked[start]) continue;
        const auto walk = random_walk_sample(g, start, size, rng(), blocked);
        if (!walk.ok()) continue;
        for (NodeId v : walk.sample.members) blocked[v] = 1;
        Graph sub = induced_subgraph(g, walk.sample.members);
        sub.set_original_ids({walk.sample.members.begin(), walk.sample.members.end()});
        by_size[si].push_back({std::move(sub), class_index, next_id++, size});
        placed = true;
      }
      if (!placed) break;
    }
  }

  CorpusExtraction out;
  out.requested = static_cast<std::int64_t>(count) * static_cast<std::int64_t>(sizes.size());
  for (auto& group : by_size) {
    out.achieved.push_back(static_cast<int>(group.size()));
    for (auto& sub : group) out.subgraphs.push_back(std::move(sub));
  }
  return out;
}

HeterogeneousNetwork splice(std::span<const LabeledSubgraph> parts, int extra_per_part,
                            std::uint64_t seed) {
  if (parts.size() < 2) throw Error("splice needs at least two parts");
  if (extra_per_part < 0) throw Error("splice edges per part must be nonnegative");

  HeterogeneousNetwork h;
  std::vector<NodeId> offset(parts.size() + 1, 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].graph.node_count() == 0) throw Error("splice part has no nodes");
    offset[p + 1] = offset[p] + parts[p].graph.node_count();
  }
  const NodeId n = offset.back();

  // Cross-part pairs available; guards against asking for more edges than
  // can exist without repeats.
  long double cross_pairs = 0;
  {
    long double seen = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const long double size = parts[p].graph.node_count();
      cross_pairs += seen * size;
      seen += size;
    }
  }
  const std::int64_t wanted =
      static_cast<std::int64_t>(extra_per_part) * static_cast<std::int64_t>(parts.size());
  if (static_cast<long double>(wanted) > cross_pairs) {
    throw Error("more splice edges requested than distinct cross-part pairs exist");
  }

  std::vector<Edge> edges;
  h.truth.resize(n);
  h.provenance.resize(n);
  h.part_size.resize(n);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& part = parts[p];
    for (NodeId v = 0; v < part.graph.node_count(); ++v) {
      h.truth[offset[p] + v] = part.class_index;
      h.provenance[offset[p] + v] = part.source_id;
      h.part_size[offset[p] + v] = part.size_class;
    }
    for (const auto& [u, v] : part.graph.edges()) {
      edges.emplace_back(offset[p] + u, offset[p] + v);
    }
  }

  std::mt19937_64 rng(seed);
  const auto random_node = [&](std::size_t p) {
    return offset[p] + static_cast<NodeId>(
                           uniform_index(rng, static_cast<std::size_t>(offset[p + 1] - offset[p])));
  };
  std::set<Edge> used;
  while (static_cast<std::int64_t>(h.splice_edges.size()) < wanted) {
    const auto a = uniform_index(rng, parts.size());
    auto b = uniform_index(rng, parts.size() - 1);
    if (b >= a) ++b;
    const NodeId u = random_node(a);
    const NodeId v = random_node(b);
    const Edge e{std::min(u, v), std::max(u, v)};
    if (!used.insert(e).second) continue;
    h.splice_edges.push_back(e);
  }
  edges.insert(edges.end(), h.splice_edges.begin(), h.splice_edges.end());

  DisjointSets sets(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) sets.unite(u, v);
  std::vector<std::vector<NodeId>> groups;
  {
    std::vector<NodeId> slot(static_cast<std::size_t>(n), -1);
    for (NodeId v = 0; v < n; ++v) {
      const NodeId r = sets.find(v);
      if (slot[r] < 0) {
        slot[r] = static_cast<NodeId>(groups.size());
        groups.emplace_back();
      }
      groups[slot[r]].push_back(v);
    }
  }
  std::vector<std::size_t> live(groups.size());
  std::iota(live.begin(), live.end(), std::size_t{0});
  while (live.size() > 1) {
    const auto a = uniform_index(rng, live.size());
    auto b = uniform_index(rng, live.size() - 1);
    if (b >= a) ++b;
    auto& ga = groups[live[a]];
    auto& gb = groups[live[b]];
    const NodeId u = ga[uniform_index(rng, ga.size())];
    const NodeId v = gb[uniform_index(rng, gb.size())];
    const Edge e{std::min(u, v), std::max(u, v)};
    h.connector_edges.push_back(e);
    edges.push_back(e);
    // Fold b into a, then drop b from the live list.
    if (ga.size() < gb.size()) ga.swap(gb);
    ga.insert(ga.end(), gb.begin(), gb.end());
    gb.clear();
    live[b] = live.back();
    live.pop_back();
  }

  h.graph = Graph::from_edges(n, edges);
  return h;
}

std::vector<int> node_diversity(const Graph& g, std::span<const int> truth) {
  if (truth.size() != static_cast<std::size_t>(g.node_count())) {
    throw Error("truth labels do not cover every node");
  }
  const int classes = truth.empty() ? 0 : *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<NodeId> stamp(static_cast<std::size_t>(classes), -1);
  std::vector<int> diversity(truth.size(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    int distinct = 1;
    stamp[truth[v]] = v;
    for (NodeId u : g.neighbors(v)) {
      if (stamp[truth[u]] != v) {
        stamp[truth[u]] = v;
        ++distinct;
      }
    }
    diversity[v] = distinct;
  }
  return diversity;
}

std::vector<int> node_diversity(const HeterogeneousNetwork& h) {
  return node_diversity(h.graph, h.truth);
}

void write_truth_tsv(std::ostream& out, const HeterogeneousNetwork& h,
                     const ClassCatalog& catalog) {
  for (std::size_t v = 0; v < h.truth.size(); ++v) {
    out << v << '\t' << catalog.name(h.truth[v]) << '\t' << h.provenance[v] << '\n';
  }
}

TruthTable read_truth_tsv(std::istream& in, const ClassCatalog& catalog,
                          NodeId node_count) {
  TruthTable table;
  table.truth.assign(static_cast<std::size_t>(node_count), -1);
  table.provenance.assign(static_cast<std::size_t>(node_count), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string field; std::getline(row, field, '\t');) fields.push_back(field);
    if (fields.size() != 3) throw ParseError(line_no, "expected node_id, class_name, subgraph_id");
    std::int64_t node = -1;
    std::int64_t subgraph = -1;
    try {
      std::size_t used = 0;
      node = std::stoll(fields[0], &used);
      if (used != fields[0].size()) node = -1;
      subgraph = std::stoll(fields[2], &used);
      if (used != fields[2].size()) throw ParseError(line_no, "bad subgraph id");
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "bad integer field");
    }
    if (node < 0 || node >= node_count) throw ParseError(line_no, "node id out of range");
    if (table.truth[node] >= 0) throw ParseError(line_no, "node listed twice");
    const int cls = catalog.index_of(fields[1]);
    if (cls < 0) throw ParseError(line_no, "unknown class '" + fields[1] + "'");
    table.truth[node] = cls;
    table.provenance[node] = subgraph;
  }
  for (NodeId v = 0; v < node_count; ++v) {
    if (table.truth[v] < 0) {
      throw ParseError(0, "truth file has no row for node " + std::to_string(v));
    }
  }
  return table;
}

std::vector<BitImage> sample_walk_images(const Graph& g, int lens_size, int count,
                                         std::uint64_t seed) {
  std::vector<BitImage> images;
  if (g.node_count() == 0 || count <= 0) return images;
  images.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  const std::int64_t budget = 20 * static_cast<std::int64_t>(count);
  for (std::int64_t attempt = 0;
       attempt < budget && static_cast<int>(images.size()) < count; ++attempt) {
    const auto start =
        static_cast<NodeId>(uniform_index(rng, static_cast<std::size_t>(g.node_count())));
    const auto walk = random_walk_sample(g, start, lens_size, rng());
    if (!walk.ok()) continue;
    images.push_back(embed_image(induced_subgraph(g, walk.sample.members)));
  }
  return images;
}

std::vector<LabeledSubgraph> family_parts(std::span<const Family> families,
                                          std::span<const int> sizes, int copies) {
  std::vector<LabeledSubgraph> parts;
  std::int64_t id = 0;
  for (std::size_t c = 0; c < families.size(); ++c) {
    for (int s : sizes) {
      const Graph g = generate_family(families[c], s);
      for (int k = 0; k < copies; ++k) {
        parts.push_back({g, static_cast<int>(c), id++, s});
      }
    }
  }
  return parts;
}

}  // namespace netlens
