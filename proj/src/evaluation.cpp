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

#include "netlens/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace netlens {
namespace {

std::int64_t lcm_up_to(int n) {
  std::int64_t l = 1;
  for (int k = 2; k <= n; ++k) {
    l = std::lcm(l, static_cast<std::int64_t>(k));
    if (l > (std::int64_t{1} << 40)) throw Error("too many classes for exact reward units");
  }
  return l;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

template <typename T>
Eigen::VectorXd to_vector(const std::vector<T>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

std::optional<double> try_pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  try {
    return pearson(x, y);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

RewardMatrix::RewardMatrix(int classes)
    : units_(Units::Zero(classes, classes)),
      scored_(static_cast<std::size_t>(classes), 0),
      unlabeled_(static_cast<std::size_t>(classes), 0),
      scale_(lcm_up_to(classes)) {
  if (classes < 2) throw Error("reward matrix needs at least two classes");
}

void RewardMatrix::add(int true_class, const Prediction& prediction) {
  if (prediction.k < 1) throw Error("prediction retains no labels");
  const std::int64_t share = scale_ / prediction.k;
  for (int label : prediction.retained()) units_(true_class, label) += share;
  ++scored_[static_cast<std::size_t>(true_class)];
}

void RewardMatrix::add_unlabeled(int true_class) {
  ++unlabeled_[static_cast<std::size_t>(true_class)];
}

double RewardMatrix::total() const {
  const auto nodes = std::accumulate(scored_.begin(), scored_.end(), std::int64_t{0}) +
                     std::accumulate(unlabeled_.begin(), unlabeled_.end(), std::int64_t{0});
  return static_cast<double>(nodes);
}

double RewardMatrix::accuracy() const {
  const double t = total();
  return t > 0 ? to_value(units_.trace()) / t : 0.0;
}

std::size_t AccuracyCurve::peak_index() const {
  if (accuracy.empty()) throw Error("empty accuracy curve");
  return static_cast<std::size_t>(std::max_element(accuracy.begin(), accuracy.end()) -
                                  accuracy.begin());
}

std::vector<double> tau_grid(double step) {
  if (!(step > 0 && step <= 1)) throw Error("tau step must lie in (0, 1]");
  const double count = 1.0 / step;
  const auto n = std::llround(count);
  if (std::abs(count - static_cast<double>(n)) > 1e-9) {
    throw Error("tau step must divide 1 evenly");
  }
  std::vector<double> taus;
  for (long long k = 1; k <= n; ++k) {
    taus.push_back(static_cast<double>(k) / static_cast<double>(n));
  }
  return taus;
}

RewardMatrix confusion_reward(std::span<const ScoredNode> nodes, int classes, double tau) {
  RewardMatrix reward(classes);
  for (const auto& node : nodes) {
    if (node.truth < 0 || node.truth >= classes) throw Error("true class out of range");
    if (node.distribution) {
      reward.add(node.truth, top_k_prediction(*node.distribution, tau));
    } else {
      reward.add_unlabeled(node.truth);
    }
  }
  return reward;
}

AccuracyCurve accuracy_curve(std::span<const ScoredNode> nodes, int classes,
                             std::span<const double> taus) {
  if (nodes.empty()) throw Error("accuracy curve needs at least one test node");
  if (taus.empty()) throw Error("accuracy curve needs at least one threshold");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0 && taus[i] <= 1) || (i > 0 && taus[i] <= taus[i - 1])) {
      throw Error("thresholds must be strictly increasing within (0, 1]");
    }
  }
  AccuracyCurve curve;
  for (double tau : taus) {
    curve.tau.push_back(tau);
    curve.accuracy.push_back(confusion_reward(nodes, classes, tau).accuracy());
  }
  return curve;
}

std::vector<DiversityRecord> diversity_records(std::span<const ScoredNode> nodes,
                                               std::span<const int> diversity) {
  std::vector<DiversityRecord> records;
  for (const auto& node : nodes) {
    if (!node.distribution) continue;
    const auto& w = *node.distribution;
    const int top = top_k_prediction(w, 1.0).ranked.front();
    records.push_back({diversity[static_cast<std::size_t>(node.node)], w(top),
                       normalized_entropy(w), top == node.truth});
  }
  return records;
}

DiversityReport diversity_report(std::span<const DiversityRecord> records) {
  struct Sums {
    std::int64_t nodes = 0;
    std::int64_t correct = 0;
    double top_weight = 0;
    double entropy = 0;
  };
  std::map<int, Sums> by_diversity;
  for (const auto& r : records) {
    auto& s = by_diversity[r.diversity];
    ++s.nodes;
    s.correct += r.top_correct ? 1 : 0;
    s.top_weight += r.top_weight;
    s.entropy += r.entropy;
  }
  DiversityReport report;
  for (const auto& [diversity, s] : by_diversity) {
    const double n = static_cast<double>(s.nodes);
    report.buckets.push_back({diversity, s.nodes, 100.0 * static_cast<double>(s.correct) / n,
                              s.top_weight / n, s.entropy / n});
  }

  std::vector<double> d, tw, en;
  for (const auto& r : records) {
    d.push_back(r.diversity);
    tw.push_back(r.top_weight);
    en.push_back(r.entropy);
  }
  if (records.size() >= 2) {
    report.top_weight_correlation = try_pearson(to_vector(d), to_vector(tw));
    report.entropy_correlation = try_pearson(to_vector(d), to_vector(en));
  }
  std::vector<double> bd, btw, ben;
  for (const auto& b : report.buckets) {
    bd.push_back(b.diversity);
    btw.push_back(b.mean_top_weight);
    ben.push_back(b.mean_entropy);
  }
  if (report.buckets.size() >= 2) {
    report.bucket_top_weight_correlation = try_pearson(to_vector(bd), to_vector(btw));
    report.bucket_entropy_correlation = try_pearson(to_vector(bd), to_vector(ben));
  }
  return report;
}

std::vector<HomogeneityRow> homogeneity_report(std::span<const HomogeneityRun> runs) {
  std::vector<HomogeneityRow> rows;
  for (const auto& run : runs) {
    HomogeneityRow row;
    row.network = run.network;
    const auto peak = run.curve.peak_index();
    row.peak_accuracy = run.curve.accuracy[peak];
    row.peak_tau = run.curve.tau[peak];
    const auto& units = run.reward_at_peak.units();
    std::int64_t best = 0;
    for (int j = 0; j < run.reward_at_peak.classes(); ++j) {
      if (j == run.true_class) continue;
      if (units(run.true_class, j) > best) {
        best = units(run.true_class, j);
        row.mode_incorrect = j;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const AccuracyCurve& curve) {
  out << "tau,accuracy\n";
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    out << fmt::format("{:.4f},{:.10f}\n", curve.tau[i], curve.accuracy[i]);
  }
}

void write_reward_csv(std::ostream& out, const RewardMatrix& reward, const ClassCatalog& catalog) {
  if (catalog.size() != reward.classes()) throw Error("catalog does not match reward matrix");
  out << "true";
  for (const auto& name : catalog.names()) out << ',' << name;
  out << ",unlabeled\n";
  for (int i = 0; i < reward.classes(); ++i) {
    out << catalog.name(i);
    for (int j = 0; j < reward.classes(); ++j) out << ',' << fmt::format("{}", reward(i, j));
    out << ',' << reward.unlabeled(i) << '\n';
  }
}

void write_diversity_csv(std::ostream& out, const DiversityReport& report) {
  out << "diversity,nodes,top_label_correct_pct,avg_top_weight,avg_entropy\n";
  for (const auto& b : report.buckets) {
    out << fmt::format("{},{},{:.4f},{:.6f},{:.6f}\n", b.diversity, b.nodes,
                       b.top_correct_percent, b.mean_top_weight, b.mean_entropy);
  }
  out << "correlation_nodes,,," << format_optional(report.top_weight_correlation) << ','
      << format_optional(report.entropy_correlation) << '\n';
  out << "correlation_buckets,,," << format_optional(report.bucket_top_weight_correlation)
      << ',' << format_optional(report.bucket_entropy_correlation) << '\n';
}

void write_homogeneity_csv(std::ostream& out, std::span<const HomogeneityRow> rows,
                           const ClassCatalog& catalog) {
  out << "network,peak_accuracy_pct,peak_tau,mode_incorrect\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{:.4f},{:.4f},{}\n", row.network, 100.0 * row.peak_accuracy,
                       row.peak_tau,
                       row.mode_incorrect ? catalog.name(*row.mode_incorrect) : "none");
  }
}

void write_predictions_csv(std::ostream& out, std::span<const ScoredNode> nodes, double tau,
                           const ClassCatalog& catalog) {
  out << "node,true,k,labels,score\n";
  for (const auto& node : nodes) {
    out << node.node << ',' << catalog.name(node.truth) << ',';
    if (!node.distribution) {
      out << "0,,0\n";
      continue;
    }
    const auto prediction = top_k_prediction(*node.distribution, tau);
    out << prediction.k << ',';
    bool first = true;
    for (int label : prediction.retained()) {
      out << (first ? "" : ";") << catalog.name(label);
      first = false;
    }
    out << ',' << fmt::format("{}", node_accuracy(prediction, node.truth)) << '\n';
  }
}

}  // namespace netlens
