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

#include "netlens/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "netlens/error.hpp"
#include "netlens/walk.hpp"

namespace netlens {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream in(value);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw Error("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw Error("config key '" + key + "': expected a boolean, got '" + text + "'");
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

std::vector<Family> families_of(const std::vector<std::string>& classes) {
  std::vector<Family> families;
  for (const auto& name : classes) families.push_back(parse_family(name));
  return families;
}

}  // namespace

void RunConfig::validate() const {
  LensLayout(sizes, 2);  // ascending, unique, >= 2
  if (subgraph_count < 1) throw Error("count must be at least 1");
  if (splice_per_part < 0) throw Error("splice_per_part must be nonnegative");
  tau_grid(tau_step);
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw Error("train_fraction must lie in (0, 1)");
  }
  if (!seed) throw Error("a seed is required");
  ClassCatalog{classes};
  if (workers < 1) throw Error("workers must be at least 1");
  if (walks_per_node < 1) throw Error("walks_per_node must be at least 1");
  if (lp_node_cap < 1) throw Error("lp_node_cap must be at least 1");
  if (training_images < 1) throw Error("training_images must be at least 1");
}

std::uint64_t RunConfig::master_seed() const {
  if (!seed) throw Error("a seed is required");
  return *seed;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "sizes") {
    config.sizes.clear();
    for (const auto& item : split_list(value)) config.sizes.push_back(parse_number<int>(key, item));
  } else if (key == "count") {
    config.subgraph_count = parse_number<int>(key, value);
  } else if (key == "splice_per_part") {
    config.splice_per_part = parse_number<int>(key, value);
  } else if (key == "tau_step") {
    config.tau_step = parse_number<double>(key, value);
  } else if (key == "train_fraction") {
    config.train_fraction = parse_number<double>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "classes") {
    config.classes = split_list(value);
  } else if (key == "workers") {
    config.workers = parse_number<int>(key, value);
  } else if (key == "walks_per_node") {
    config.walks_per_node = parse_number<int>(key, value);
  } else if (key == "lp_node_cap") {
    config.lp_node_cap = parse_number<std::int64_t>(key, value);
  } else if (key == "training_images") {
    config.training_images = parse_number<int>(key, value);
  } else if (key == "row_normalize") {
    config.row_normalize = parse_bool(key, value);
  } else if (key == "weight_method") {
    const auto v = trim(value);
    if (v == "lp") {
      config.weight_method = WeightMethod::kLinearProgram;
    } else if (v == "naive") {
      config.weight_method = WeightMethod::kNaive;
    } else {
      throw Error("weight_method must be 'lp' or 'naive'");
    }
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    try {
      set_config_value(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return base;
}

std::uint64_t stage_seed(std::uint64_t master, Stage stage) {
  return mix_seed(master, 0xC0FFEE, static_cast<std::uint64_t>(stage));
}

HeterogeneousNetwork homogeneous_network(Family family, int class_index,
                                         std::span<const int> sizes, int copies,
                                         int splice_per_part, std::uint64_t seed) {
  auto parts = family_parts(std::span<const Family>(&family, 1), sizes, copies);
  if (parts.size() < 2) throw Error("a homogeneous network needs at least two parts");
  for (auto& part : parts) part.class_index = class_index;
  return splice(parts, splice_per_part, seed);
}

std::vector<CentroidModel> train_family_models(const ClassCatalog& catalog,
                                               std::span<const Family> families,
                                               const RunConfig& config, std::uint64_t seed) {
  if (static_cast<int>(families.size()) != catalog.size()) {
    throw Error("one family per catalog class is required");
  }
  std::vector<Graph> sources;
  for (int c = 0; c < catalog.size(); ++c) {
    sources.push_back(homogeneous_network(families[static_cast<std::size_t>(c)], c, config.sizes,
                                          config.subgraph_count, config.splice_per_part,
                                          mix_seed(seed, static_cast<std::uint64_t>(c), 0))
                          .graph);
  }
  std::vector<CentroidModel> models;
  for (int lens : config.sizes) {
    std::vector<LabeledImage> samples;
    for (int c = 0; c < catalog.size(); ++c) {
      const auto images = sample_walk_images(
          sources[static_cast<std::size_t>(c)], lens, config.training_images,
          mix_seed(seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(lens), 1));
      for (const auto& img : images) samples.push_back({img, c});
    }
    models.push_back(train_centroid_model<double>(samples, catalog, lens));
  }
  return models;
}

std::vector<std::unique_ptr<SignatureClassifier>> as_classifiers(
    std::span<const CentroidModel> models) {
  std::vector<std::unique_ptr<SignatureClassifier>> out;
  for (const auto& m : models) out.push_back(std::make_unique<CentroidClassifier>(m));
  return out;
}

std::vector<const SignatureClassifier*> raw_pointers(
    std::span<const std::unique_ptr<SignatureClassifier>> classifiers) {
  std::vector<const SignatureClassifier*> out;
  for (const auto& c : classifiers) out.push_back(c.get());
  return out;
}

WeightFit fit_weights(const TallySet& tallies, std::span<const int> truth,
                      std::span<const NodeId> train_nodes, const RunConfig& config) {
  WeightFit fit;
  if (config.weight_method == WeightMethod::kNaive) {
    const auto acc = per_lens_accuracy(tallies, truth, train_nodes);
    Eigen::VectorXd values(static_cast<Eigen::Index>(acc.per_row.size()));
    for (std::size_t r = 0; r < acc.per_row.size(); ++r) {
      values(static_cast<Eigen::Index>(r)) = acc.per_row[r].value_or(0.0);
    }
    fit.weights = naive_weights(values);
    return fit;
  }
  const auto sample = subsample(train_nodes, static_cast<std::size_t>(config.lp_node_cap),
                                stage_seed(config.master_seed(), Stage::kSubsample));
  const auto examples = training_nodes(tallies, truth, sample, config.row_normalize);
  const auto solution = solve_weights_lp(examples);
  fit.weights = solution.p;
  fit.lp_objective = solution.objective;
  return fit;
}

std::vector<ScoredNode> score_nodes(const TallySet& tallies, std::span<const int> truth,
                                    std::span<const NodeId> nodes, const WeightVector& weights) {
  std::vector<ScoredNode> scored;
  scored.reserve(nodes.size());
  for (NodeId v : nodes) {
    scored.push_back({v, truth[v], node_distribution(tallies.node(v), weights)});
  }
  return scored;
}

PipelineResult run_pipeline(const Graph& g, std::span<const int> truth,
                            const LensLayout& layout,
                            std::span<const SignatureClassifier* const> classifiers,
                            const RunConfig& config, std::span<const int> diversity) {
  config.validate();
  if (truth.size() != static_cast<std::size_t>(g.node_count())) {
    throw Error("truth labels do not cover every node");
  }
  const auto master = config.master_seed();
  PipelineResult result;
  result.lens = run_lenses(g, layout, classifiers,
                           {stage_seed(master, Stage::kLens), config.workers, config.walks_per_node});
  const auto& tallies = result.lens.tallies;
  result.split = train_test_split(g.node_count(), config.train_fraction,
                                  stage_seed(master, Stage::kSplit));
  const auto fit = fit_weights(tallies, truth, result.split.train, config);
  result.weights = fit.weights;
  result.lp_objective = fit.lp_objective;
  result.test_nodes = score_nodes(tallies, truth, result.split.test, result.weights);
  const auto taus = tau_grid(config.tau_step);
  result.curve = accuracy_curve(result.test_nodes, layout.class_count(), taus);
  result.reward_at_peak = confusion_reward(result.test_nodes, layout.class_count(), result.peak_tau());
  result.lens_accuracy = per_lens_accuracy(tallies, truth, result.split.test);
  if (!diversity.empty()) {
    result.diversity = diversity_report(diversity_records(result.test_nodes, diversity));
  }
  return result;
}

void write_pipeline_artifacts(const std::filesystem::path& dir, const PipelineResult& result,
                              const ClassCatalog& catalog) {
  std::filesystem::create_directories(dir);
  const auto& layout = result.lens.tallies.layout();
  write_file(dir / "tally.csv",
             render([&](std::ostream& o) { write_tally_csv(o, result.lens.tallies, catalog); }));
  const std::string comment =
      result.lp_objective ? fmt::format("method=lp objective={:.17g}", *result.lp_objective)
                          : std::string("method=naive");
  write_file(dir / "weights.txt", render([&](std::ostream& o) {
               write_weights(o, layout, result.weights, comment);
             }));
  write_file(dir / "curve.csv", render([&](std::ostream& o) { write_curve_csv(o, result.curve); }));
  write_file(dir / "reward.csv", render([&](std::ostream& o) {
               write_reward_csv(o, result.reward_at_peak, catalog);
             }));
  write_file(dir / "predictions.csv", render([&](std::ostream& o) {
               write_predictions_csv(o, result.test_nodes, result.peak_tau(), catalog);
             }));
  write_file(dir / "lens_accuracy.csv", render([&](std::ostream& o) {
               const auto cell = [](const std::optional<double>& v) {
                 return v ? fmt::format("{:.4f}", *v) : std::string();
               };
               o << "size,pooled_pct,start_only_pct,member_only_pct\n";
               const auto& acc = result.lens_accuracy;
               for (std::size_t i = 0; i < layout.sizes().size(); ++i) {
                 o << layout.sizes()[i] << ',' << cell(acc.pooled[i]) << ','
                   << cell(acc.start_only[i]) << ',' << cell(acc.member_only[i]) << '\n';
               }
             }));
  if (result.diversity) {
    write_file(dir / "diversity.csv",
               render([&](std::ostream& o) { write_diversity_csv(o, *result.diversity); }));
  }
}

DemoResult run_demo(const RunConfig& config, const std::optional<std::filesystem::path>& out) {
  config.validate();
  const auto master = config.master_seed();
  ClassCatalog catalog(config.classes);
  const auto families = families_of(config.classes);
  const auto models =
      train_family_models(catalog, families, config, stage_seed(master, Stage::kTraining));
  const auto classifiers = as_classifiers(models);
  const auto pointers = raw_pointers(classifiers);

  const auto parts = family_parts(families, config.sizes, config.subgraph_count);
  auto network = splice(parts, config.splice_per_part, stage_seed(master, Stage::kSplice));
  const auto diversity = node_diversity(network);
  const LensLayout layout(config.sizes, catalog.size());
  auto pipeline = run_pipeline(network.graph, network.truth, layout, pointers, config, diversity);

  if (out) {
    std::filesystem::create_directories(*out / "models");
    for (const auto& m : models) {
      write_file(*out / "models" / fmt::format("model_{}.nlm", m.lens_size()),
                 render([&](std::ostream& o) { write_model(o, m); }));
    }
    write_file(*out / "network.el",
               render([&](std::ostream& o) { write_edge_list(o, network.graph); }));
    write_file(*out / "truth.tsv",
               render([&](std::ostream& o) { write_truth_tsv(o, network, catalog); }));
    write_pipeline_artifacts(*out, pipeline, catalog);
    write_file(*out / "summary.txt", render([&](std::ostream& o) {
                 o << fmt::format("nodes {}\nedges {}\nsplice_edges {}\nconnector_edges {}\n",
                                  network.graph.node_count(), network.graph.edge_count(),
                                  network.splice_edges.size(), network.connector_edges.size());
                 o << fmt::format("top1_accuracy {:.10f}\npeak_accuracy {:.10f}\npeak_tau {:.4f}\n",
                                  pipeline.top1_accuracy(),
                                  pipeline.curve.accuracy[pipeline.curve.peak_index()],
                                  pipeline.peak_tau());
               }));
  }
  return {std::move(catalog), std::move(network), std::move(pipeline)};
}

std::vector<HomogeneityRun> run_homogeneity(const RunConfig& config,
                                            std::span<const CentroidModel> models,
                                            std::span<const Family> families) {
  config.validate();
  if (models.empty()) throw Error("homogeneity analysis needs trained models");
  const auto& catalog = models.front().catalog();
  if (static_cast<int>(families.size()) != catalog.size()) {
    throw Error("one family per catalog class is required");
  }
  const auto classifiers = as_classifiers(models);
  const auto pointers = raw_pointers(classifiers);
  const LensLayout layout(config.sizes, catalog.size());
  const auto master = config.master_seed();

  std::vector<HomogeneityRun> runs;
  for (int c = 0; c < catalog.size(); ++c) {
    const auto network = homogeneous_network(
        families[static_cast<std::size_t>(c)], c, config.sizes, config.subgraph_count,
        config.splice_per_part, mix_seed(stage_seed(master, Stage::kSplice), 0x484F4D, c));
    auto result = run_pipeline(network.graph, network.truth, layout, pointers, config);
    runs.push_back({catalog.name(c), c, result.curve, result.reward_at_peak});
  }
  return runs;
}

}  // namespace netlens
