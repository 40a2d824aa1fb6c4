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

#include "netlens/embedding.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "netlens/error.hpp"
#include "netlens/walk.hpp"

namespace netlens {
namespace {

using Coloring = std::vector<int>;

// Refines `colors` (dense ranks, smaller = earlier) until stable. A node's
// new rank is ordered by (old rank, multiset hash of neighbor ranks), so the
// partition only ever splits and the relative order of existing classes is
// preserved.
class ColorRefiner {
 public:
  explicit ColorRefiner(const Graph& g)
      : g_(g), hash_(g.node_count()), order_(g.node_count()), next_(g.node_count()) {}

  void refine(Coloring& colors) {
    const NodeId n = g_.node_count();
    int classes = n == 0 ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
    while (classes < n) {
      for (NodeId v = 0; v < n; ++v) {
        std::uint64_t h = 0;
        for (NodeId u : g_.neighbors(v)) h += splitmix64(static_cast<std::uint64_t>(colors[u]));
        hash_[v] = h;
      }
      std::iota(order_.begin(), order_.end(), 0);
      std::sort(order_.begin(), order_.end(), [&](NodeId a, NodeId b) {
        if (colors[a] != colors[b]) return colors[a] < colors[b];
        return hash_[a] < hash_[b];
      });
      int rank = 0;
      for (NodeId i = 0; i < n; ++i) {
        const NodeId v = order_[i];
        if (i > 0) {
          const NodeId p = order_[i - 1];
          if (colors[p] != colors[v] || hash_[p] != hash_[v]) ++rank;
        }
        next_[v] = rank;
      }
      const int refined = rank + 1;
      colors.swap(next_);
      if (refined == classes) break;
      classes = refined;
    }
  }

  // Splits `v` out of its class, placing it first among its former peers.
  static void individualize(Coloring& colors, NodeId v) {
    const int c = colors[v];
    for (auto& color : colors) {
      if (color >= c) ++color;
    }
    colors[v] = c;
  }

 private:
  const Graph& g_;
  std::vector<std::uint64_t> hash_;
  std::vector<NodeId> order_;
  Coloring next_;
};

// Ranks by (degree desc, sorted neighbor-degree sequence desc).
Coloring degree_key_coloring(const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<std::vector<int>> key(n);
  for (NodeId v = 0; v < n; ++v) {
    auto& k = key[v];
    k.reserve(g.degree(v));
    for (NodeId u : g.neighbors(v)) k.push_back(g.degree(u));
    std::sort(k.begin(), k.end(), std::greater<>());
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto better = [&](NodeId a, NodeId b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return key[a] > key[b];
  };
  std::sort(order.begin(), order.end(), better);
  Coloring colors(n);
  int rank = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (i > 0 && better(order[i - 1], order[i])) ++rank;
    colors[order[i]] = rank;
  }
  return colors;
}

// Lowest-color node among `pool`; if several share that color, the
// lowest-index one is individualized and the coloring re-refined.
NodeId pick_first(std::vector<NodeId>& pool, Coloring& colors, ColorRefiner& refiner) {
  const auto best = *std::min_element(pool.begin(), pool.end(), [&](NodeId a, NodeId b) {
    return colors[a] < colors[b];
  });
  const int c = colors[best];
  NodeId chosen = -1;
  int ties = 0;
  for (NodeId v : pool) {
    if (colors[v] == c) {
      ++ties;
      if (chosen < 0 || v < chosen) chosen = v;
    }
  }
  if (ties > 1) {
    ColorRefiner::individualize(colors, chosen);
    refiner.refine(colors);
  }
  pool.erase(std::find(pool.begin(), pool.end(), chosen));
  return chosen;
}

std::vector<NodeId> bfs_order(const Graph& g, NodeId root, Coloring colors,
                              ColorRefiner& refiner) {
  const NodeId n = g.node_count();
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<std::uint8_t> placed(n, 0);
  const auto place = [&](NodeId v) {
    order.push_back(v);
    placed[v] = 1;
  };

  ColorRefiner::individualize(colors, root);
  refiner.refine(colors);
  place(root);

  std::vector<NodeId> pool;
  std::size_t head = 0;
  while (static_cast<NodeId>(order.size()) < n) {
    if (head == order.size()) {
      // Next component: restart from the best unplaced node.
      pool.clear();
      for (NodeId v = 0; v < n; ++v) {
        if (!placed[v]) pool.push_back(v);
      }
      place(pick_first(pool, colors, refiner));
      continue;
    }
    const NodeId u = order[head++];
    pool.clear();
    for (NodeId w : g.neighbors(u)) {
      if (!placed[w]) pool.push_back(w);
    }
    while (!pool.empty()) place(pick_first(pool, colors, refiner));
  }
  return order;
}

// Row-major bit string packed so that comparing word vectors compares the
// strings lexicographically.
std::vector<std::uint64_t> packed_bits(const Graph& g, const std::vector<NodeId>& order) {
  const NodeId n = g.node_count();
  std::vector<NodeId> position(n);
  for (NodeId i = 0; i < n; ++i) position[order[i]] = i;
  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<std::uint64_t> words((total + 63) / 64, 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : g.neighbors(u)) {
      const std::size_t bit = static_cast<std::size_t>(position[u]) * n + position[w];
      words[bit / 64] |= std::uint64_t{1} << (63 - bit % 64);
    }
  }
  return words;
}

}  // namespace

BitImage::BitImage(Bits bits) : bits_(std::move(bits)) {
  if (bits_.rows() != bits_.cols()) throw Error("bit image must be square");
  for (Eigen::Index i = 0; i < bits_.rows(); ++i) {
    if (bits_(i, i) != 0) throw Error("bit image diagonal must be zero");
    for (Eigen::Index j = 0; j < bits_.cols(); ++j) {
      if (bits_(i, j) > 1) throw Error("bit image entries must be 0 or 1");
      if (bits_(i, j) != bits_(j, i)) throw Error("bit image must be symmetric");
    }
  }
}

std::vector<NodeId> canonical_order(const Graph& g) {
  const NodeId n = g.node_count();
  if (n == 0) throw Error("canonical_order: empty graph");
  ColorRefiner refiner(g);
  Coloring colors = degree_key_coloring(g);
  refiner.refine(colors);

  std::vector<NodeId> best_order;
  std::vector<std::uint64_t> best_bits;
  for (NodeId root = 0; root < n; ++root) {
    if (colors[root] != 0) continue;
    auto order = bfs_order(g, root, colors, refiner);
    auto bits = packed_bits(g, order);
    if (best_order.empty() || bits < best_bits) {
      best_order = std::move(order);
      best_bits = std::move(bits);
    }
  }
  return best_order;
}

BitImage image_under_order(const Graph& g, const std::vector<NodeId>& order) {
  const NodeId n = g.node_count();
  if (static_cast<NodeId>(order.size()) != n) throw Error("ordering size mismatch");
  std::vector<NodeId> position(n, -1);
  for (NodeId i = 0; i < n; ++i) {
    if (order[i] < 0 || order[i] >= n || position[order[i]] >= 0) {
      throw Error("ordering is not a permutation");
    }
    position[order[i]] = i;
  }
  BitImage::Bits bits = BitImage::Bits::Zero(n, n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : g.neighbors(u)) bits(position[u], position[w]) = 1;
  }
  return BitImage(std::move(bits));
}

BitImage embed_image(const Graph& g) { return image_under_order(g, canonical_order(g)); }

void write_pbm(std::ostream& out, const BitImage& img) {
  const int n = img.size();
  out << "P1\n" << n << ' ' << n << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > 0) out << ' ';
      out << (img(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

std::string write_pbm(const BitImage& img) {
  std::ostringstream out;
  write_pbm(out, img);
  return out.str();
}

BitImage read_pbm(std::istream& in) {
  // P1 tokens: magic, width, height, then pixels that may or may not be
  // separated by whitespace. Comments run from '#' to end of line.
  std::size_t line = 1;
  const auto next_char = [&]() -> int {
    int c = in.get();
    while (c == '#') {
      while (c != '\n' && c != EOF) c = in.get();
    }
    if (c == '\n') ++line;
    return c;
  };
  const auto skip_space = [&]() -> int {
    int c = next_char();
    while (c == ' ' || c == '\t' || c == '\r' || c == '\n') c = next_char();
    return c;
  };
  const auto read_int = [&]() {
    int c = skip_space();
    if (c < '0' || c > '9') throw ParseError(line, "expected PBM dimension");
    long value = 0;
    while (c >= '0' && c <= '9') {
      value = value * 10 + (c - '0');
      if (value > 1 << 20) throw ParseError(line, "PBM dimension too large");
      c = next_char();
    }
    return static_cast<int>(value);
  };

  if (skip_space() != 'P' || in.get() != '1') throw ParseError(line, "expected PBM magic P1");
  const int width = read_int();
  const int height = read_int();
  if (width != height) throw ParseError(line, "adjacency image must be square");
  BitImage::Bits bits(height, width);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const int c = skip_space();
      if (c != '0' && c != '1') throw ParseError(line, "expected pixel 0 or 1");
      bits(i, j) = static_cast<std::uint8_t>(c - '0');
    }
  }
  try {
    return BitImage(std::move(bits));
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace netlens
