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

#include "netlens/lens.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "netlens/embedding.hpp"
#include "netlens/error.hpp"
#include "netlens/walk.hpp"

namespace netlens {

LensLayout::LensLayout(std::vector<int> sizes, int class_count)
    : sizes_(std::move(sizes)), class_count_(class_count) {
  if (sizes_.empty()) throw Error("at least one lens size is required");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 2) throw Error("lens sizes must be at least 2");
    if (i > 0 && sizes_[i] <= sizes_[i - 1]) {
      throw Error("lens sizes must be strictly ascending");
    }
  }
  if (class_count_ < 2) throw Error("at least two classes are required");
}

std::string LensLayout::row_label(int row) const {
  return std::to_string(size_of_row(row)) +
         (mode_of_row(row) == LabelMode::kStart ? ":start" : ":member");
}

int LensLayout::parse_row_label(const std::string& label) const {
  for (int r = 0; r < rows(); ++r) {
    if (row_label(r) == label) return r;
  }
  return -1;
}

TallySet::TallySet(LensLayout layout, NodeId node_count)
    : layout_(std::move(layout)),
      data_(Counts::Zero(node_count,
                         static_cast<Eigen::Index>(layout_.rows()) * layout_.class_count())) {}

LensRunReport run_lenses(const Graph& g, const LensLayout& layout,
                         std::span<const SignatureClassifier* const> classifiers,
                         const LensRunOptions& options) {
  const auto& sizes = layout.sizes();
  if (classifiers.size() != sizes.size()) {
    throw Error("one classifier per lens size is required");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (classifiers[i] == nullptr || classifiers[i]->lens_size() != sizes[i]) {
      throw Error("classifier for lens size " + std::to_string(sizes[i]) +
                  " is missing or has the wrong size");
    }
    if (classifiers[i]->class_count() != layout.class_count()) {
      throw Error("classifier class count does not match the catalog");
    }
  }
  if (options.walks_per_node < 1) throw Error("walks per node must be at least 1");
  if (options.workers < 1) throw Error("worker count must be at least 1");

  const NodeId n = g.node_count();
  LensRunReport report;
  report.tallies = TallySet(layout, n);
  const std::size_t size_count = sizes.size();
  report.walks_ok.assign(size_count, 0);
  report.component_too_small.assign(size_count, 0);
  report.walk_exhausted.assign(size_count, 0);

  auto& tallies = report.tallies;
  std::mutex stats_mutex;
  std::exception_ptr failure;
  std::atomic<NodeId> next_block{0};
  constexpr NodeId kBlock = 64;

  const auto work = [&] {
    std::vector<std::int64_t> ok(size_count, 0), small(size_count, 0), exhausted(size_count, 0);
    try {
      for (;;) {
        const NodeId begin = next_block.fetch_add(kBlock);
        if (begin >= n) break;
        const NodeId end = std::min(n, begin + kBlock);
        for (NodeId v = begin; v < end; ++v) {
          for (std::size_t si = 0; si < size_count; ++si) {
            const int size = sizes[si];
            for (int rep = 0; rep < options.walks_per_node; ++rep) {
              const auto seed = mix_seed(options.seed, static_cast<std::uint64_t>(v),
                                         static_cast<std::uint64_t>(size),
                                         static_cast<std::uint64_t>(rep));
              const auto walk = random_walk_sample(g, v, size, seed);
              if (!walk.ok()) {
                ++(walk.status == WalkStatus::kComponentTooSmall ? small : exhausted)[si];
                continue;
              }
              ++ok[si];
              const auto& members = walk.sample.members;
              const BitImage img = embed_image(induced_subgraph(g, members));
              const int label = classifiers[si]->predict(img, seed);
              const int start_row = layout.row(si, LabelMode::kStart);
              const int member_row = layout.row(si, LabelMode::kMember);
              std::atomic_ref<std::int32_t>(tallies.at(v, start_row, label))
                  .fetch_add(1, std::memory_order_relaxed);
              for (std::size_t k = 1; k < members.size(); ++k) {
                std::atomic_ref<std::int32_t>(tallies.at(members[k], member_row, label))
                    .fetch_add(1, std::memory_order_relaxed);
              }
            }
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(stats_mutex);
      if (!failure) failure = std::current_exception();
      next_block.store(n);
    }
    std::lock_guard lock(stats_mutex);
    for (std::size_t si = 0; si < size_count; ++si) {
      report.walks_ok[si] += ok[si];
      report.component_too_small[si] += small[si];
      report.walk_exhausted[si] += exhausted[si];
    }
  };

  const int workers = options.workers;
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

LensAccuracy per_lens_accuracy(const TallySet& tallies, std::span<const int> truth,
                               std::span<const NodeId> nodes) {
  const auto& layout = tallies.layout();
  if (truth.size() != static_cast<std::size_t>(tallies.node_count())) {
    throw Error("truth labels do not cover every node");
  }
  const int rows = layout.rows();
  std::vector<std::int64_t> hits(rows, 0), totals(rows, 0);
  const auto visit = [&](NodeId v) {
    const auto block = tallies.node(v);
    for (int r = 0; r < rows; ++r) {
      hits[r] += block(r, truth[v]);
      totals[r] += block.row(r).cast<std::int64_t>().sum();
    }
  };
  if (nodes.empty()) {
    for (NodeId v = 0; v < tallies.node_count(); ++v) visit(v);
  } else {
    for (NodeId v : nodes) visit(v);
  }

  const auto percent = [](std::int64_t hit, std::int64_t total) -> std::optional<double> {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(hit) / static_cast<double>(total);
  };
  LensAccuracy acc;
  for (int r = 0; r < rows; ++r) acc.per_row.push_back(percent(hits[r], totals[r]));
  for (std::size_t si = 0; si < layout.sizes().size(); ++si) {
    const int s = layout.row(si, LabelMode::kStart);
    const int m = layout.row(si, LabelMode::kMember);
    acc.pooled.push_back(percent(hits[s] + hits[m], totals[s] + totals[m]));
    acc.start_only.push_back(acc.per_row[s]);
    acc.member_only.push_back(acc.per_row[m]);
  }
  return acc;
}

void write_tally_csv(std::ostream& out, const TallySet& tallies, const ClassCatalog& catalog) {
  const auto& layout = tallies.layout();
  if (catalog.size() != layout.class_count()) throw Error("catalog does not match tally classes");
  out << "node,row,class,count\n";
  for (NodeId v = 0; v < tallies.node_count(); ++v) {
    const auto block = tallies.node(v);
    for (int r = 0; r < layout.rows(); ++r) {
      for (int c = 0; c < layout.class_count(); ++c) {
        if (block(r, c) != 0) {
          out << v << ',' << layout.row_label(r) << ',' << catalog.name(c) << ','
              << block(r, c) << '\n';
        }
      }
    }
  }
}

TallySet read_tally_csv(std::istream& in, const LensLayout& layout,
                        const ClassCatalog& catalog, NodeId node_count) {
  if (catalog.size() != layout.class_count()) throw Error("catalog does not match tally classes");
  TallySet tallies(layout, node_count);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "node,row,class,count") continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string field; std::getline(row, field, ',');) fields.push_back(field);
    if (fields.size() != 4) throw ParseError(line_no, "expected node,row,class,count");
    long long node = -1;
    long long count = -1;
    try {
      node = std::stoll(fields[0]);
      count = std::stoll(fields[3]);
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "bad integer field");
    }
    if (node < 0 || node >= node_count) throw ParseError(line_no, "node id out of range");
    if (count < 0 || count > INT32_MAX) throw ParseError(line_no, "bad count");
    const int r = layout.parse_row_label(fields[1]);
    if (r < 0) throw ParseError(line_no, "unknown lens row '" + fields[1] + "'");
    const int c = catalog.index_of(fields[2]);
    if (c < 0) throw ParseError(line_no, "unknown class '" + fields[2] + "'");
    tallies.at(static_cast<NodeId>(node), r, c) += static_cast<std::int32_t>(count);
  }
  return tallies;
}

}  // namespace netlens
