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
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netlens/aggregation.hpp"
#include "netlens/classifier.hpp"
#include "netlens/evaluation.hpp"
#include "netlens/lens.hpp"
#include "netlens/testbed.hpp"

namespace netlens {

enum class WeightMethod { kLinearProgram, kNaive };

struct RunConfig {
  std::vector<int> sizes{8, 16, 32, 64};
  int subgraph_count = 30;      // parts per class and size
  int splice_per_part = 10;
  double tau_step = 0.05;
  double train_fraction = 0.8;
  std::optional<std::uint64_t> seed;  // required; never taken from the clock
  std::vector<std::string> classes{"star", "wheel", "ladder"};
  int workers = 1;
  int walks_per_node = 1;
  std::int64_t lp_node_cap = 5000;
  int training_images = 100;    // per class and lens size
  bool row_normalize = false;
  WeightMethod weight_method = WeightMethod::kLinearProgram;

  // Throws Error when a field is out of range or the seed is missing.
  void validate() const;
  std::uint64_t master_seed() const;
};

// Flat "key = value" lines; '#' starts a comment. Keys: sizes, count,
// splice_per_part, tau_step, train_fraction, seed, classes, workers,
// walks_per_node, lp_node_cap, training_images, row_normalize,
// weight_method. Lists are comma separated. Unknown keys are errors.
RunConfig parse_config(std::istream& in, RunConfig base = {});
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

// Independent stream seeds for the stages of one run.
enum class Stage : std::uint64_t {
  kTraining = 1,
  kSplice = 2,
  kLens = 3,
  kSplit = 4,
  kSubsample = 5,
  kCorpus = 6,
};
std::uint64_t stage_seed(std::uint64_t master, Stage stage);

// Spliced network built only from copies of one family, every node labeled
// `class_index`.
HeterogeneousNetwork homogeneous_network(Family family, int class_index,
                                         std::span<const int> sizes, int copies,
                                         int splice_per_part, std::uint64_t seed);

// One model per lens size, trained on walk images from a homogeneous network
// of each class.
std::vector<CentroidModel> train_family_models(const ClassCatalog& catalog,
                                               std::span<const Family> families,
                                               const RunConfig& config, std::uint64_t seed);

std::vector<std::unique_ptr<SignatureClassifier>> as_classifiers(
    std::span<const CentroidModel> models);
std::vector<const SignatureClassifier*> raw_pointers(
    std::span<const std::unique_ptr<SignatureClassifier>> classifiers);

struct PipelineResult {
  LensRunReport lens;
  Split split;
  WeightVector weights;
  std::optional<double> lp_objective;     // set for the LP method
  std::vector<ScoredNode> test_nodes;
  AccuracyCurve curve;
  RewardMatrix reward_at_peak;
  LensAccuracy lens_accuracy;             // over test nodes
  std::optional<DiversityReport> diversity;

  double peak_tau() const { return curve.tau[curve.peak_index()]; }
  // Mean accuracy at the smallest threshold on the grid.
  double top1_accuracy() const { return curve.accuracy.front(); }
};

// Lenses over every node, split, weight learning on training nodes,
// distributions and curves on test nodes. Diversity analytics are computed
// when `diversity` is non-empty.
PipelineResult run_pipeline(const Graph& g, std::span<const int> truth,
                            const LensLayout& layout,
                            std::span<const SignatureClassifier* const> classifiers,
                            const RunConfig& config, std::span<const int> diversity = {});

// Weight learning and scoring for an existing tally set.
struct WeightFit {
  WeightVector weights;
  std::optional<double> lp_objective;
};
WeightFit fit_weights(const TallySet& tallies, std::span<const int> truth,
                      std::span<const NodeId> train_nodes, const RunConfig& config);
std::vector<ScoredNode> score_nodes(const TallySet& tallies, std::span<const int> truth,
                                    std::span<const NodeId> nodes, const WeightVector& weights);

// Writes tally.csv, weights.txt, curve.csv, reward.csv, predictions.csv,
// lens_accuracy.csv and, when present, diversity.csv into `dir`.
void write_pipeline_artifacts(const std::filesystem::path& dir, const PipelineResult& result,
                              const ClassCatalog& catalog);

struct DemoResult {
  ClassCatalog catalog;
  HeterogeneousNetwork network;
  PipelineResult pipeline;
};

// The star / wheel / ladder clustering experiment: family models, spliced
// testbed from config.subgraph_count parts per class and size, lenses, LP
// weights and evaluation. Artifacts go to `out` when given.
DemoResult run_demo(const RunConfig& config,
                    const std::optional<std::filesystem::path>& out = std::nullopt);

// Per class c: a network spliced only from family c parts, run through the
// pipeline with the multi-class models.
std::vector<HomogeneityRun> run_homogeneity(const RunConfig& config,
                                            std::span<const CentroidModel> models,
                                            std::span<const Family> families);

}  // namespace netlens
