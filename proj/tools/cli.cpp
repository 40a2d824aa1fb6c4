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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "netlens/aggregation.hpp"
#include "netlens/classifier.hpp"
#include "netlens/embedding.hpp"
#include "netlens/error.hpp"
#include "netlens/evaluation.hpp"
#include "netlens/experiment.hpp"
#include "netlens/graph.hpp"
#include "netlens/lens.hpp"
#include "netlens/testbed.hpp"

namespace netlens::cli {
namespace fs = std::filesystem;
namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

void save(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

template <typename Writer>
void save_with(const fs::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  save(path, buffer.str());
}

Graph load_graph(const fs::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

// Flags mirroring RunConfig keys; values are applied on top of --config.
class ConfigFlags {
 public:
  void attach(CLI::App* app, std::initializer_list<const char*> keys) {
    app->add_option("--config", config_path_, "key=value run configuration file");
    for (const char* key : keys) {
      auto& slot = values_[key];
      std::string flag = std::string("--") + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      options_.emplace_back(key, app->add_option(flag, slot, std::string("override '") + key + "'"));
    }
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path_.empty()) {
      auto in = open_in(config_path_);
      config = parse_config(in);
    }
    for (const auto& [key, option] : options_) {
      if (option->count() > 0) set_config_value(config, key, values_.at(key));
    }
    return config;
  }

 private:
  std::string config_path_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

struct ModelSet {
  std::vector<CentroidModel> models;  // ascending lens size
  const ClassCatalog& catalog() const { return models.front().catalog(); }
  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& m : models) out.push_back(m.lens_size());
    return out;
  }
};

ModelSet load_models(const fs::path& dir) {
  static const std::regex pattern(R"(model_(\d+)\.nlm)");
  std::vector<std::pair<int, fs::path>> files;
  if (!fs::is_directory(dir)) throw Error("model directory not found: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const auto name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) files.emplace_back(std::stoi(m[1]), entry.path());
  }
  if (files.empty()) throw Error("no model_<size>.nlm files in " + dir.string());
  std::sort(files.begin(), files.end());
  ModelSet set;
  for (const auto& [size, path] : files) {
    auto in = open_in(path);
    set.models.push_back(read_model(in));
    if (set.models.back().lens_size() != size) {
      throw Error(path.string() + ": lens size does not match the file name");
    }
    if (!(set.models.back().catalog() == set.models.front().catalog())) {
      throw Error(path.string() + ": class catalog differs from the other models");
    }
  }
  return set;
}

std::vector<Family> families_for(const ClassCatalog& catalog) {
  std::vector<Family> out;
  for (const auto& name : catalog.names()) out.push_back(parse_family(name));
  return out;
}

struct LabeledNetwork {
  Graph graph;
  TruthTable truth;
};

LabeledNetwork load_network(const std::string& graph_path, const std::string& truth_path,
                            const ClassCatalog& catalog) {
  LabeledNetwork net{load_graph(graph_path), {}};
  auto in = open_in(truth_path);
  net.truth = read_truth_tsv(in, catalog, net.graph.node_count());
  return net;
}

TallySet load_tally(const std::string& path, const LensLayout& layout, const ClassCatalog& catalog,
                    NodeId node_count) {
  auto in = open_in(path);
  return read_tally_csv(in, layout, catalog, node_count);
}

// "8:start 91.5" lines; missing rows count as zero accuracy.
Eigen::VectorXd read_accuracies(const fs::path& path, const LensLayout& layout) {
  auto in = open_in(path);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(layout.rows());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string label;
    double value = 0;
    if (!(fields >> label) || label.front() == '#') continue;
    if (!(fields >> value)) throw ParseError(line_no, "expected '<size>:<mode> <accuracy>'");
    const int row = layout.parse_row_label(label);
    if (row < 0) throw ParseError(line_no, "unknown lens row '" + label + "'");
    acc(row) = value;
  }
  return acc;
}

int cmd_ingest(const std::string& input, const std::string& output, std::ostream& out) {
  auto in = open_in(input);
  BuildStats stats;
  const Graph g = parse_edge_list(in, &stats);
  save_with(output, [&](std::ostream& o) { write_edge_list(o, g); });
  out << fmt::format("nodes {} edges {} self_loops_dropped {} duplicates_dropped {}\n",
                     g.node_count(), g.edge_count(), stats.self_loops_dropped,
                     stats.duplicates_dropped);
  return 0;
}

struct CorpusArgs {
  std::string graph;
  std::string family;
  std::string label;
  std::string out;
};

int cmd_corpus(const CorpusArgs& args, const RunConfig& config, std::ostream& out) {
  if (args.graph.empty() == args.family.empty()) {
    throw Error("give exactly one of --graph or --family");
  }
  const Graph g =
      args.graph.empty()
          ? homogeneous_network(parse_family(args.family), 0, config.sizes, config.subgraph_count,
                                config.splice_per_part,
                                stage_seed(config.master_seed(), Stage::kSplice))
                .graph
          : load_graph(args.graph);
  const std::string label = args.label.empty() ? args.family : args.label;
  if (label.empty()) throw Error("--label is required with --graph");
  const auto extraction = extract_corpus(g, config.subgraph_count, config.sizes,
                                         stage_seed(config.master_seed(), Stage::kCorpus));
  const fs::path dir = fs::path(args.out) / label;
  std::vector<int> written(config.sizes.size(), 0);
  for (const auto& sub : extraction.subgraphs) {
    const auto it = std::find(config.sizes.begin(), config.sizes.end(), sub.size_class);
    const auto slot = static_cast<std::size_t>(it - config.sizes.begin());
    save(dir / std::to_string(sub.size_class) / fmt::format("{}.pbm", written[slot]++),
         write_pbm(embed_image(sub.graph)));
  }
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    out << fmt::format("size {} requested {} achieved {}\n", config.sizes[i],
                       config.subgraph_count, extraction.achieved[i]);
  }
  return 0;
}

int cmd_train(const std::vector<std::string>& corpora, const std::string& classes,
              const std::string& out_dir, std::ostream& out) {
  RunConfig scratch;
  set_config_value(scratch, "classes", classes);
  const ClassCatalog catalog(scratch.classes);
  // Layout: <corpus>/<class>/<size>/<k>.pbm
  std::map<int, std::vector<LabeledImage>> by_size;
  for (const auto& corpus : corpora) {
    if (!fs::is_directory(corpus)) throw Error("corpus directory not found: " + corpus);
    for (int c = 0; c < catalog.size(); ++c) {
      const fs::path class_dir = fs::path(corpus) / catalog.name(c);
      if (!fs::is_directory(class_dir)) continue;
      std::vector<std::pair<int, fs::path>> files;
      for (const auto& size_dir : fs::directory_iterator(class_dir)) {
        if (!size_dir.is_directory()) continue;
        const int size = std::stoi(size_dir.path().filename().string());
        for (const auto& f : fs::directory_iterator(size_dir.path())) {
          if (f.path().extension() == ".pbm") files.emplace_back(size, f.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& [size, path] : files) {
        auto in = open_in(path);
        try {
          by_size[size].push_back({read_pbm(in), c});
        } catch (const Error& e) {
          throw Error(path.string() + ": " + e.what());
        }
      }
    }
  }
  if (by_size.empty()) throw Error("the corpus is empty");
  for (const auto& [size, samples] : by_size) {
    const auto model = train_centroid_model<double>(samples, catalog, size);
    save_with(fs::path(out_dir) / fmt::format("model_{}.nlm", size),
              [&](std::ostream& o) { write_model(o, model); });
    out << fmt::format("size {} samples {}\n", size, samples.size());
  }
  return 0;
}

int cmd_splice(const RunConfig& config, const std::string& out_dir, std::ostream& out) {
  config.validate();
  const ClassCatalog catalog(config.classes);
  const auto families = families_for(catalog);
  const auto parts = family_parts(families, config.sizes, config.subgraph_count);
  const auto network =
      splice(parts, config.splice_per_part, stage_seed(config.master_seed(), Stage::kSplice));
  const fs::path dir(out_dir);
  save_with(dir / "network.el", [&](std::ostream& o) { write_edge_list(o, network.graph); });
  save_with(dir / "truth.tsv", [&](std::ostream& o) { write_truth_tsv(o, network, catalog); });
  out << fmt::format("parts {} nodes {} edges {} splice_edges {} connector_edges {}\n",
                     parts.size(), network.graph.node_count(), network.graph.edge_count(),
                     network.splice_edges.size(), network.connector_edges.size());
  return 0;
}

struct LensArgs {
  std::string graph;
  std::string models;
  std::string classifier = "centroid";
  std::string out;
};

int cmd_lens(const LensArgs& args, const RunConfig& config, std::ostream& out) {
  const Graph g = load_graph(args.graph);
  std::unique_ptr<ClassCatalog> catalog;
  std::vector<std::unique_ptr<SignatureClassifier>> classifiers;
  std::vector<int> sizes;
  if (args.classifier == "centroid") {
    if (args.models.empty()) throw Error("--models is required for the centroid classifier");
    const auto set = load_models(args.models);
    catalog = std::make_unique<ClassCatalog>(set.catalog());
    sizes = set.sizes();
    classifiers = as_classifiers(set.models);
  } else if (args.classifier == "random") {
    catalog = std::make_unique<ClassCatalog>(config.classes);
    sizes = config.sizes;
    for (int s : sizes) {
      classifiers.push_back(std::make_unique<UniformRandomClassifier>(s, catalog->size()));
    }
  } else {
    throw Error("--classifier must be 'centroid' or 'random'");
  }
  const LensLayout layout(sizes, catalog->size());
  const auto pointers = raw_pointers(classifiers);
  const auto report = run_lenses(
      g, layout, pointers,
      {stage_seed(config.master_seed(), Stage::kLens), config.workers, config.walks_per_node});
  save_with(args.out, [&](std::ostream& o) { write_tally_csv(o, report.tallies, *catalog); });
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << fmt::format("size {} ok {} component_too_small {} walk_exhausted {}\n", sizes[i],
                       report.walks_ok[i], report.component_too_small[i],
                       report.walk_exhausted[i]);
  }
  return 0;
}

struct TallyInputs {
  std::string graph;
  std::string truth;
  std::string tally;
};

int cmd_weights(const TallyInputs& in, const std::string& method, const std::string& accuracies,
                const std::string& out_path, RunConfig config, std::ostream& out) {
  const ClassCatalog catalog(config.classes);
  const LensLayout layout(config.sizes, catalog.size());
  if (method == "naive" && !accuracies.empty()) {
    const auto p = naive_weights(read_accuracies(accuracies, layout));
    save_with(out_path, [&](std::ostream& o) { write_weights(o, layout, p, "method=naive"); });
    return 0;
  }
  if (method == "naive") {
    config.weight_method = WeightMethod::kNaive;
  } else if (method == "lp") {
    config.weight_method = WeightMethod::kLinearProgram;
  } else {
    throw Error("--method must be 'lp' or 'naive'");
  }
  config.validate();
  const auto net = load_network(in.graph, in.truth, catalog);
  const auto tallies = load_tally(in.tally, layout, catalog, net.graph.node_count());
  const auto split = train_test_split(net.graph.node_count(), config.train_fraction,
                                      stage_seed(config.master_seed(), Stage::kSplit));
  const auto fit = fit_weights(tallies, net.truth.truth, split.train, config);
  const std::string comment = fit.lp_objective
                                  ? fmt::format("method=lp objective={:.17g}", *fit.lp_objective)
                                  : std::string("method=naive");
  save_with(out_path, [&](std::ostream& o) { write_weights(o, layout, fit.weights, comment); });
  if (fit.lp_objective) out << fmt::format("objective {:.10g}\n", *fit.lp_objective);
  return 0;
}

int cmd_evaluate(const TallyInputs& in, const std::string& weights_path,
                 const std::string& out_dir, const RunConfig& config, std::ostream& out) {
  config.validate();
  const ClassCatalog catalog(config.classes);
  const LensLayout layout(config.sizes, catalog.size());
  const auto net = load_network(in.graph, in.truth, catalog);
  PipelineResult result;
  result.lens.tallies = load_tally(in.tally, layout, catalog, net.graph.node_count());
  {
    auto w = open_in(weights_path);
    result.weights = read_weights(w, layout);
  }
  result.split = train_test_split(net.graph.node_count(), config.train_fraction,
                                  stage_seed(config.master_seed(), Stage::kSplit));
  result.test_nodes =
      score_nodes(result.lens.tallies, net.truth.truth, result.split.test, result.weights);
  result.curve = accuracy_curve(result.test_nodes, catalog.size(), tau_grid(config.tau_step));
  result.reward_at_peak = confusion_reward(result.test_nodes, catalog.size(), result.peak_tau());
  result.lens_accuracy = per_lens_accuracy(result.lens.tallies, net.truth.truth, result.split.test);
  const auto diversity = node_diversity(net.graph, net.truth.truth);
  result.diversity = diversity_report(diversity_records(result.test_nodes, diversity));
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  save_with(dir / "curve.csv", [&](std::ostream& o) { write_curve_csv(o, result.curve); });
  save_with(dir / "reward.csv",
            [&](std::ostream& o) { write_reward_csv(o, result.reward_at_peak, catalog); });
  save_with(dir / "predictions.csv", [&](std::ostream& o) {
    write_predictions_csv(o, result.test_nodes, result.peak_tau(), catalog);
  });
  save_with(dir / "diversity.csv",
            [&](std::ostream& o) { write_diversity_csv(o, *result.diversity); });
  out << fmt::format("top1 {:.6f} peak {:.6f} at tau {:.2f}\n", result.top1_accuracy(),
                     result.curve.accuracy[result.curve.peak_index()], result.peak_tau());
  return 0;
}

int cmd_homogeneity(const std::string& models_dir, const std::string& out_dir, RunConfig config,
                    std::ostream& out) {
  const auto set = load_models(models_dir);
  config.classes = set.catalog().names();
  config.sizes = set.sizes();
  const auto families = families_for(set.catalog());
  const auto runs = run_homogeneity(config, set.models, families);
  const auto rows = homogeneity_report(runs);
  const fs::path dir(out_dir);
  save_with(dir / "homogeneity.csv",
            [&](std::ostream& o) { write_homogeneity_csv(o, rows, set.catalog()); });
  for (const auto& run : runs) {
    save_with(dir / fmt::format("curve_{}.csv", run.network),
              [&](std::ostream& o) { write_curve_csv(o, run.curve); });
  }
  for (const auto& row : rows) {
    out << fmt::format("{} peak {:.2f}% at tau {:.2f}\n", row.network, 100.0 * row.peak_accuracy,
                       row.peak_tau);
  }
  return 0;
}

int cmd_demo(const RunConfig& config, const std::string& out_dir, std::ostream& out) {
  const auto demo = run_demo(config, fs::path(out_dir));
  const auto& p = demo.pipeline;
  out << fmt::format("nodes {} test_nodes {} top1 {:.6f} peak {:.6f} at tau {:.2f}\n",
                     demo.network.graph.node_count(), p.test_nodes.size(), p.top1_accuracy(),
                     p.curve.accuracy[p.curve.peak_index()], p.peak_tau());
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Node classification through random-walk lenses over graph signatures",
               "netlens"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string input, output;
  auto* ingest = app.add_subcommand("ingest", "Normalize an edge list into the graph store");
  ingest->add_option("--input", input, "Edge list (u v per line, # comments)")->required();
  ingest->add_option("--output", output, "Output graph file")->required();

  CorpusArgs corpus_args;
  ConfigFlags corpus_flags;
  auto* corpus = app.add_subcommand("corpus", "Extract walk subgraphs and write PBM images");
  corpus->add_option("--graph", corpus_args.graph, "Source graph file");
  corpus->add_option("--family", corpus_args.family,
                     "Use a homogeneous spliced network of this family as the source");
  corpus->add_option("--label", corpus_args.label, "Class name used as the corpus subdirectory");
  corpus->add_option("--out", corpus_args.out, "Output directory")->required();
  corpus_flags.attach(corpus, {"sizes", "count", "splice_per_part", "seed"});

  std::vector<std::string> train_corpora;
  std::string train_classes, train_out;
  auto* train = app.add_subcommand("train", "Train centroid models from PBM corpora");
  train->add_option("--corpus", train_corpora, "Corpus directory (repeatable)")->required();
  train->add_option("--classes", train_classes, "Comma-separated class catalog")->required();
  train->add_option("--out", train_out, "Model directory")->required();

  std::string splice_out;
  ConfigFlags splice_flags;
  auto* splice_cmd = app.add_subcommand("splice", "Build a heterogeneous testbed");
  splice_cmd->add_option("--out", splice_out, "Output directory")->required();
  splice_flags.attach(splice_cmd, {"sizes", "count", "splice_per_part", "classes", "seed"});

  LensArgs lens_args;
  ConfigFlags lens_flags;
  auto* lens = app.add_subcommand("lens", "Run lenses over every node and write tallies");
  lens->add_option("--graph", lens_args.graph, "Graph file")->required();
  lens->add_option("--models", lens_args.models, "Model directory");
  lens->add_option("--classifier", lens_args.classifier, "centroid or random");
  lens->add_option("--out", lens_args.out, "Tally CSV")->required();
  lens_flags.attach(lens, {"seed", "workers", "walks_per_node", "sizes", "classes"});

  TallyInputs weights_in;
  std::string weights_method = "lp", weights_acc, weights_out;
  ConfigFlags weights_flags;
  auto* weights = app.add_subcommand("weights", "Fit lens weights");
  weights->add_option("--graph", weights_in.graph, "Graph file");
  weights->add_option("--truth", weights_in.truth, "Truth TSV");
  weights->add_option("--tally", weights_in.tally, "Tally CSV");
  weights->add_option("--method", weights_method, "lp or naive");
  weights->add_option("--accuracies", weights_acc, "Per-lens accuracies for naive weights");
  weights->add_option("--out", weights_out, "Weights file")->required();
  weights_flags.attach(weights, {"seed", "sizes", "classes", "train_fraction", "lp_node_cap",
                                 "row_normalize"});

  TallyInputs eval_in;
  std::string eval_weights, eval_out;
  ConfigFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Score test nodes and write curves");
  evaluate->add_option("--graph", eval_in.graph, "Graph file")->required();
  evaluate->add_option("--truth", eval_in.truth, "Truth TSV")->required();
  evaluate->add_option("--tally", eval_in.tally, "Tally CSV")->required();
  evaluate->add_option("--weights", eval_weights, "Weights file")->required();
  evaluate->add_option("--out", eval_out, "Output directory")->required();
  eval_flags.attach(evaluate, {"seed", "sizes", "classes", "train_fraction", "tau_step"});

  std::string homo_models, homo_out;
  ConfigFlags homo_flags;
  auto* homogeneity = app.add_subcommand("homogeneity", "Run the pipeline on pure networks");
  homogeneity->add_option("--models", homo_models, "Model directory")->required();
  homogeneity->add_option("--out", homo_out, "Output directory")->required();
  homo_flags.attach(homogeneity, {"seed", "count", "splice_per_part", "tau_step",
                                  "train_fraction", "workers", "lp_node_cap"});

  std::string demo_out;
  ConfigFlags demo_flags;
  auto* demo = app.add_subcommand("demo", "End-to-end star, wheel and ladder run");
  demo->add_option("--out", demo_out, "Output directory")->required();
  demo_flags.attach(demo, {"seed", "workers", "sizes", "count", "splice_per_part", "classes",
                           "tau_step", "train_fraction", "walks_per_node", "lp_node_cap",
                           "training_images", "row_normalize", "weight_method"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(input, output, out);
    if (*corpus) return cmd_corpus(corpus_args, corpus_flags.resolve(), out);
    if (*train) return cmd_train(train_corpora, train_classes, train_out, out);
    if (*splice_cmd) return cmd_splice(splice_flags.resolve(), splice_out, out);
    if (*lens) return cmd_lens(lens_args, lens_flags.resolve(), out);
    if (*weights) {
      if (!(weights_method == "naive" && !weights_acc.empty()) &&
          (weights_in.graph.empty() || weights_in.truth.empty() || weights_in.tally.empty())) {
        err << "error: --graph, --truth and --tally are required unless --accuracies is given\n";
        return 2;
      }
      return cmd_weights(weights_in, weights_method, weights_acc, weights_out,
                         weights_flags.resolve(), out);
    }
    if (*evaluate) return cmd_evaluate(eval_in, eval_weights, eval_out, eval_flags.resolve(), out);
    if (*homogeneity) return cmd_homogeneity(homo_models, homo_out, homo_flags.resolve(), out);
    if (*demo) return cmd_demo(demo_flags.resolve(), demo_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace netlens::cli
