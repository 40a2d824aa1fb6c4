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

#include "netlens/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "netlens/error.hpp"

namespace netlens {
namespace {

constexpr std::string_view kHeaderPrefix = "# netlens graph";

std::string_view trim_left(std::string_view s) {
  const auto pos = s.find_first_not_of(" \t\r");
  return pos == std::string_view::npos ? std::string_view{} : s.substr(pos);
}

// Next whitespace-delimited token of `s`, advancing it; empty at end.
std::string_view next_token(std::string_view& s) {
  s = trim_left(s);
  const auto end = s.find_first_of(" \t\r");
  const auto token = s.substr(0, end);
  s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
  return token;
}

std::int64_t parse_id(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || value < 0) {
    throw ParseError(line, "expected a nonnegative integer node id, got '" +
                               std::string(token) + "'");
  }
  return value;
}

}  // namespace

Graph Graph::from_edges(NodeId node_count, std::span<const Edge> edges,
                        BuildStats* stats) {
  if (node_count < 0) throw Error("negative node count");
  BuildStats local;
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      throw Error("edge endpoint out of range: (" + std::to_string(u) + ", " +
                  std::to_string(v) + ")");
    }
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  const auto before = arcs.size();
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  local.duplicates_dropped = static_cast<std::int64_t>(before - arcs.size()) / 2;

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  g.targets_.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++g.offsets_[u + 1];
    g.targets_.push_back(v);
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  if (stats != nullptr) *stats = local;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto a = neighbors(u);
  auto b = neighbors(v);
  if (b.size() < a.size()) {
    std::swap(a, b);
    std::swap(u, v);
  }
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

void Graph::set_original_ids(std::vector<std::int64_t> ids) {
  if (!ids.empty() && ids.size() != static_cast<std::size_t>(node_count())) {
    throw Error("original id map size does not match node count");
  }
  original_ids_ = std::move(ids);
}

Graph parse_edge_list(std::istream& in, BuildStats* stats) {
  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::int64_t> original;
  std::vector<Edge> edges;
  const auto intern = [&](std::int64_t id) {
    const auto [it, inserted] =
        dense.try_emplace(id, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim_left(line);
    if (rest.empty() || rest.front() == '#') continue;
    const auto a = next_token(rest);
    const auto b = next_token(rest);
    if (b.empty()) throw ParseError(line_no, "expected two node ids");
    const NodeId u = intern(parse_id(a, line_no));
    const NodeId v = intern(parse_id(b, line_no));
    edges.emplace_back(u, v);
  }
  Graph g = Graph::from_edges(static_cast<NodeId>(original.size()), edges, stats);
  g.set_original_ids(std::move(original));
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << kHeaderPrefix << " nodes=" << g.node_count()
      << " edges=" << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
  std::string first;
  if (!std::getline(in, first)) return Graph::from_edges(0, {});
  if (!std::string_view(first).starts_with(kHeaderPrefix)) {
    // Not our format: re-feed the first line to the generic parser.
    std::string rest(std::istreambuf_iterator<char>(in), {});
    std::istringstream whole(first + "\n" + rest);
    return parse_edge_list(whole);
  }
  const auto pos = first.find("nodes=");
  if (pos == std::string::npos) throw ParseError(1, "graph header lacks nodes=");
  std::string_view count_text = first;
  count_text.remove_prefix(pos + 6);
  const auto node_count = parse_id(next_token(count_text), 1);

  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim_left(line);
    if (rest.empty() || rest.front() == '#') continue;
    const auto a = parse_id(next_token(rest), line_no);
    const auto b_token = next_token(rest);
    if (b_token.empty()) throw ParseError(line_no, "expected two node ids");
    const auto b = parse_id(b_token, line_no);
    if (a >= node_count || b >= node_count) {
      throw ParseError(line_no, "node id exceeds header node count");
    }
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return Graph::from_edges(static_cast<NodeId>(node_count), edges);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  // (host id, local index), sorted by host id for membership lookups.
  std::vector<std::pair<NodeId, NodeId>> lookup;
  lookup.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || nodes[i] >= g.node_count()) {
      throw Error("induced_subgraph: node id " + std::to_string(nodes[i]) +
                  " out of range");
    }
    lookup.emplace_back(nodes[i], static_cast<NodeId>(i));
  }
  std::sort(lookup.begin(), lookup.end());
  for (std::size_t i = 1; i < lookup.size(); ++i) {
    if (lookup[i].first == lookup[i - 1].first) {
      throw Error("induced_subgraph: repeated node id " +
                  std::to_string(lookup[i].first));
    }
  }
  const auto local_of = [&](NodeId host) -> NodeId {
    auto it = std::lower_bound(lookup.begin(), lookup.end(),
                               std::pair<NodeId, NodeId>{host, -1});
    return (it != lookup.end() && it->first == host) ? it->second : -1;
  };

  const auto k = nodes.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId u = nodes[i];
    const auto adj = g.neighbors(u);
    if (adj.size() <= 4 * k) {
      for (NodeId w : adj) {
        const NodeId j = local_of(w);
        if (j > static_cast<NodeId>(i)) edges.emplace_back(static_cast<NodeId>(i), j);
      }
    } else {
      // High-degree member: probe the other members instead of scanning.
      for (std::size_t j = i + 1; j < k; ++j) {
        if (std::binary_search(adj.begin(), adj.end(), nodes[j])) {
          edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        }
      }
    }
  }
  return Graph::from_edges(static_cast<NodeId>(k), edges);
}

std::vector<NodeId> connected_components(const Graph& g, NodeId* count) {
  std::vector<NodeId> label(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<NodeId> stack;
  NodeId next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return label;
}

bool is_connected(const Graph& g) {
  NodeId count = 0;
  connected_components(g, &count);
  return count <= 1;
}

}  // namespace netlens
