// Copyright 2026 The covertrain Authors. All Rights Reserved.
//
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

// covertrain: cover discovery, latent SVM training and evaluation.
//
//   covertrain synth --out data.csv
//   covertrain cover --data data.csv --out-dir run/
//   covertrain train --data data.csv --method slsvm --init cover --model run/model.txt
//   covertrain eval  --data test.csv --model run/model.txt
//   covertrain cv    --data data.csv --out-json cv.json --out-table cv.txt
//   covertrain graph --data data.csv --k 5 --out-edges edges.txt
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covertrain/dataset.hpp"
#include "covertrain/error.hpp"
#include "covertrain/eval.hpp"
#include "covertrain/json_io.hpp"
#include "covertrain/latent_svm.hpp"
#include "covertrain/manifest.hpp"
#include "covertrain/model.hpp"
#include "covertrain/neighbor_graph.hpp"
#include "covertrain/smooth_lsvm.hpp"
#include "covertrain/submodular_cover.hpp"

namespace fs = std::filesystem;
using namespace covertrain;

namespace {

// JSON config files. Top-level keys apply when the subcommand has a matching
// flag; a section named after the subcommand applies unconditionally and
// overrides top-level keys. Flags given on the command line always win.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file " + path + ": expected a JSON object");

  auto normalize = [](std::string key) {
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    return key;
  };
  auto scalar = [&](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw UsageError("config file " + path + ": unsupported value " + v.dump());
  };

  std::map<std::string, nlohmann::json> merged;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) continue;
    const std::string name = normalize(key);
    if (sub->get_option_no_throw("--" + name) != nullptr) merged[name] = value;
  }
  if (const auto it = j.find(sub->get_name()); it != j.end()) {
    if (!it->is_object()) throw UsageError("config file " + path + ": section must be an object");
    for (const auto& [key, value] : it->items()) {
      const std::string name = normalize(key);
      if (sub->get_option_no_throw("--" + name) == nullptr) {
        throw UsageError("config file " + path + ": unknown option '" + key + "' for " +
                         sub->get_name());
      }
      merged[name] = value;
    }
  }
  for (const auto& [name, value] : merged) {
    if (name == "config") continue;
    CLI::Option* opt = sub->get_option("--" + name);
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      // Flags: a boolean picks between the flag and its negation.
      const bool on = value.is_boolean() ? value.get<bool>() : scalar(value) == "true";
      opt->add_result(opt->get_flag_value("--" + name, on ? "true" : "false"));
    } else if (value.is_array()) {
      for (const auto& v : value) opt->add_result(scalar(v));
    } else {
      opt->add_result(scalar(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config file " + path + ": --" + name + ": " + e.what());
    }
  }
}

// Files written by one command. Unless committed, everything written is
// removed again when the set goes out of scope.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    for (const fs::path& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  void write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw DataError("failed writing " + path.string());
  }

  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string json_text(const RunManifest& manifest, Json body) {
  Json out;
  out["manifest"] = manifest.to_json();
  for (auto& [key, value] : body.items()) out[key] = std::move(value);
  return out.dump(2) + "\n";
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  bool record_time = false;
  std::string format = "dense-csv";
  std::string config;
  CLI::App* sub_ = nullptr;

  void add(CLI::App* sub, bool with_format = true) {
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--record-time", record_time,
                  "Record the wall-clock start time in the manifest");
    if (with_format) {
      sub->add_option("--format", format, "dense-csv or sparse-bag")->capture_default_str();
    }
    sub->add_option("--config", config, "JSON file supplying any flag");
    sub_ = sub;
  }

  // Runs body after filling unset options from --config.
  std::function<void()> wrap(std::function<void()> body) {
    return [this, body] {
      if (!config.empty()) apply_config(sub_, config);
      body();
    };
  }

  RunManifest manifest(const std::string& command) const {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    if (record_time) m.started = utc_timestamp();
    return m;
  }
};

Dataset load_input(const std::string& path, const std::string& format,
                   RunManifest& manifest) {
  if (path.empty()) throw UsageError("--data is required");
  const DataFormat f = parse_data_format(format);
  manifest.add_input(path);
  manifest.params["format"] = to_string(f);
  return load_dataset(path, f);
}

// ---------------------------------------------------------------- cover flags

struct CoverFlags {
  int k = 10;
  int t = 3;
  std::string g = "sqrt";
  double alpha = 0.9;
  int n_clusters = 1;
  std::string greedy = "lazy";

  void add(CLI::App* sub) {
    sub->add_option("--k", k, "Neighbors kept per instance")->capture_default_str();
    sub->add_option("--t", t, "Per-bag coverage cap")->capture_default_str();
    sub->add_option("--g", g, "Concave function: identity, sqrt or log1p")
        ->capture_default_str();
    sub->add_option("--alpha", alpha, "Coverage fraction to reach")->capture_default_str();
    sub->add_option("--n-clusters", n_clusters, "Selected nodes used as positives")
        ->capture_default_str();
    sub->add_option("--greedy", greedy, "lazy or naive")->capture_default_str();
  }

  CoverConfig config() const {
    CoverConfig cfg;
    cfg.k = k;
    cfg.t = t;
    cfg.g = parse_concave_fn(g);
    cfg.alpha = alpha;
    cfg.validate();
    return cfg;
  }

  GreedyMode mode() const {
    if (greedy == "lazy") return GreedyMode::kLazy;
    if (greedy == "naive") return GreedyMode::kNaive;
    throw UsageError("unknown --greedy '" + greedy + "' (expected lazy or naive)");
  }

  Json params() const {
    const CoverConfig cfg = config();
    const bool min_cost = cfg.t == 1 && cfg.g == ConcaveFn::kIdentity;
    return Json{{"k", k},
                {"t", t},
                {"g", to_string(cfg.g)},
                {"alpha", alpha},
                {"n_clusters", n_clusters},
                {"greedy", greedy},
                {"mode", min_cost ? "min-cost-cover" : "multi-cover"}};
  }
};

struct CoverRun {
  BipartiteGraph graph;
  CoverResult result;
  std::vector<std::set<InstanceRef>> clusters;
};

CoverRun run_cover(const Dataset& ds, const CoverFlags& flags, int threads) {
  CoverRun run;
  const CoverConfig cfg = flags.config();
  run.graph = build_graph(ds, cfg.k, threads);
  run.result = greedy_cover(run.graph, cfg, flags.mode());
  const int n = std::min<int>(flags.n_clusters, static_cast<int>(run.result.selected.size()));
  if (flags.n_clusters < 1) throw UsageError("--n-clusters must be at least 1");
  if (n == 0) throw DataError("cover selected no nodes; the graph has no edges");
  run.clusters = extract_positives(run.result, run.graph, n);
  return run;
}

// --------------------------------------------------------------------- synth

struct SynthCmd {
  Common common;
  SynthParams p;
  std::string out;
  std::string truth;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("synth", "Generate a planted-signal dataset");
    common.add(sub);
    sub->add_option("--out", out, "Dataset file");
    sub->add_option("--truth", truth, "Ground-truth sidecar (default: <out>.truth)");
    sub->add_option("--n-pos", p.n_pos, "Positive bags")->capture_default_str();
    sub->add_option("--n-neg", p.n_neg, "Negative bags")->capture_default_str();
    sub->add_option("--bag-size", p.bag_size, "Instances per bag")->capture_default_str();
    sub->add_option("--dim", p.dim, "Feature dimension")->capture_default_str();
    sub->add_option("--signal-sep", p.signal_sep, "Offset of planted signals")
        ->capture_default_str();
    sub->add_option("--clutter-sep", p.clutter_sep,
                    "Offset of per-bag clutter in positive bags (0 disables)")
        ->capture_default_str();
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    if (out.empty()) throw UsageError("--out is required");
    p.seed = common.seed;
    RunManifest manifest = common.manifest("synth");
    const DataFormat format = parse_data_format(common.format);
    manifest.params = Json{{"n_pos", p.n_pos},         {"n_neg", p.n_neg},
                           {"bag_size", p.bag_size},   {"dim", p.dim},
                           {"signal_sep", p.signal_sep}, {"clutter_sep", p.clutter_sep},
                           {"format", to_string(format)}};
    const SyntheticData data = synth_generate(p);
    std::ostringstream ds_text, truth_text;
    ds_text << manifest.comment_line();
    write_dataset(ds_text, data.dataset, format);
    truth_text << manifest.comment_line();
    write_ground_truth(truth_text, data.truth);

    OutputSet outputs;
    outputs.write(out, ds_text.str());
    outputs.write(truth.empty() ? out + ".truth" : truth, truth_text.str());
    outputs.commit();
  }
};

// --------------------------------------------------------------------- graph

struct GraphCmd {
  Common common;
  std::string data;
  int k = 10;
  std::string out_edges;
  std::string out_summary;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("graph", "Build and export the neighbor graph");
    common.add(sub);
    sub->add_option("--data", data, "Dataset file");
    sub->add_option("--k", k, "Neighbors kept per instance")->capture_default_str();
    sub->add_option("--out-edges", out_edges, "Edge list (text)");
    sub->add_option("--out-summary", out_summary, "Summary (JSON); stdout if omitted");
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    RunManifest manifest = common.manifest("graph");
    const Dataset ds = load_input(data, common.format, manifest);
    manifest.params["k"] = k;
    const BipartiteGraph graph = build_graph(ds, k, common.threads);
    const std::string summary = json_text(manifest, Json{{"graph", graph_summary_json(graph)}});
    OutputSet outputs;
    if (!out_edges.empty()) {
      std::ostringstream edges;
      edges << manifest.comment_line();
      write_edges(edges, graph);
      outputs.write(out_edges, edges.str());
    }
    if (out_summary.empty()) {
      std::cout << summary;
    } else {
      outputs.write(out_summary, summary);
    }
    outputs.commit();
  }
};

// --------------------------------------------------------------------- cover

struct CoverCmd {
  Common common;
  CoverFlags flags;
  std::string data;
  std::string out_dir = ".";

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("cover", "Select a discriminative cover of the positives");
    common.add(sub);
    flags.add(sub);
    sub->add_option("--data", data, "Dataset file");
    sub->add_option("--out-dir", out_dir, "Directory for cover.json and positives.txt")
        ->capture_default_str();
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    RunManifest manifest = common.manifest("cover");
    const Dataset ds = load_input(data, common.format, manifest);
    const Json cover_params = flags.params();
    for (auto& [key, value] : cover_params.items()) manifest.params[key] = value;
    const CoverRun run = run_cover(ds, flags, common.threads);

    Json body = cover_result_json(run.result, run.graph, flags.config());
    body["graph"] = graph_summary_json(run.graph);
    Json clusters = Json::array();
    std::ostringstream listing;
    listing << manifest.comment_line() << "# cluster bag_id instance_id\n";
    for (std::size_t c = 0; c < run.clusters.size(); ++c) {
      Json members = Json::array();
      for (const InstanceRef& r : run.clusters[c]) {
        members.push_back(Json{{"bag_id", r.bag_id}, {"instance_id", r.instance_id}});
        listing << c << ' ' << r.bag_id << ' ' << r.instance_id << '\n';
      }
      clusters.push_back(std::move(members));
    }
    body["clusters"] = std::move(clusters);

    OutputSet outputs;
    outputs.write(fs::path(out_dir) / "cover.json", json_text(manifest, std::move(body)));
    outputs.write(fs::path(out_dir) / "positives.txt", listing.str());
    outputs.commit();
  }
};

// --------------------------------------------------------------------- train

struct TrainCmd {
  Common common;
  CoverFlags cover;
  std::string data;
  std::string method = "slsvm";
  std::string init = "bagavg";
  double c = 1.0;
  std::string loss;
  bool bias = false;
  double mu = 0.1;
  int n_top = 0;
  std::string omega = "euclidean";
  int max_outer = 50;
  double outer_tol = 1e-6;
  OptConfig opt;
  std::string model_out;
  std::string report_out;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("train", "Train a bag classifier");
    common.add(sub);
    cover.add(sub);
    sub->add_option("--data", data, "Training dataset file");
    sub->add_option("--method", method, "svm, lsvm or slsvm")->capture_default_str();
    sub->add_option("--init", init, "cover, bagavg or negmine")->capture_default_str();
    sub->add_option("--c", c, "Loss weight C")->capture_default_str();
    sub->add_option("--loss", loss,
                    "hinge, squared_hinge or logistic (default: hinge for lsvm, "
                    "squared_hinge otherwise)");
    sub->add_flag("--bias", bias, "Learn an unregularized bias");
    sub->add_option("--mu", mu, "Smoothing parameter")->capture_default_str();
    sub->add_option("--n-top", n_top, "Top-N truncation (0 uses every instance)")
        ->capture_default_str();
    sub->add_option("--omega", omega, "euclidean or entropy")->capture_default_str();
    sub->add_option("--max-outer", max_outer, "Outer iterations (lsvm)")->capture_default_str();
    sub->add_option("--outer-tol", outer_tol, "Relative outer decrease to stop (lsvm)")
        ->capture_default_str();
    sub->add_option("--grad-tol", opt.grad_tol, "Optimizer gradient tolerance")
        ->capture_default_str();
    sub->add_option("--max-iters", opt.max_iters, "Optimizer iteration limit")
        ->capture_default_str();
    sub->add_option("--memory", opt.memory, "L-BFGS memory")->capture_default_str();
    sub->add_option("--model", model_out, "Model output file");
    sub->add_option("--report", report_out, "Report output (default: <model>.json)");
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    if (model_out.empty()) throw UsageError("--model is required");
    RunManifest manifest = common.manifest("train");
    const Dataset ds = load_input(data, common.format, manifest);
    if (method != "svm" && method != "lsvm" && method != "slsvm") {
      throw UsageError("unknown --method '" + method + "' (expected svm, lsvm or slsvm)");
    }
    if (init != "cover" && init != "bagavg" && init != "negmine") {
      throw UsageError("unknown --init '" + init + "' (expected cover, bagavg or negmine)");
    }
    const LossKind loss_kind =
        parse_loss(loss.empty() ? (method == "lsvm" ? "hinge" : "squared_hinge") : loss);
    opt.validate();

    TrainConfig tcfg;
    tcfg.c = c;
    tcfg.loss = loss_kind;
    tcfg.max_outer = max_outer;
    tcfg.outer_tol = outer_tol;
    tcfg.inner = opt;
    tcfg.validate();

    manifest.params["method"] = method;
    manifest.params["init"] = init;
    manifest.params["C"] = c;
    manifest.params["loss"] = to_string(loss_kind);
    manifest.params["bias"] = bias;
    manifest.params["optimizer"] = Json{{"memory", opt.memory},
                                        {"grad_tol", opt.grad_tol},
                                        {"max_iters", opt.max_iters}};
    if (method == "lsvm") {
      manifest.params["max_outer"] = max_outer;
      manifest.params["outer_tol"] = outer_tol;
    }
    SmoothConfig scfg;
    if (method == "slsvm") {
      scfg.mu = mu;
      scfg.n_top = n_top;
      scfg.omega = parse_omega(omega);
      scfg.loss = loss_kind;
      scfg.c = c;
      scfg.validate();
      manifest.params["mu"] = mu;
      manifest.params["n_top"] = n_top;
      manifest.params["omega"] = to_string(scfg.omega);
    }
    if (init == "cover") manifest.params["cover"] = cover.params();

    // Initial positive set.
    std::vector<InstanceRef> positives;
    Json init_info{{"kind", init}};
    if (init == "cover") {
      const CoverRun run = run_cover(ds, cover, common.threads);
      std::set<InstanceRef> merged;
      for (const auto& cluster : run.clusters) merged.insert(cluster.begin(), cluster.end());
      positives.assign(merged.begin(), merged.end());
      init_info["selected"] = run.result.selected.size();
      init_info["f_final"] = run.result.f_final;
      init_info["f_total"] = run.result.f_total;
    } else if (init == "negmine") {
      for (const auto& [bag, inst] : negative_mine(ds)) positives.push_back({bag, inst});
    }
    init_info["positives"] = init == "bagavg" ? ds.positive_count()
                                              : static_cast<int>(positives.size());
    const Model init_model = init == "bagavg"
                                 ? train_initial_svm_bag_average(ds, tcfg, bias)
                                 : train_initial_svm(ds, positives, tcfg, bias);

    Model model;
    Json training;
    if (method == "svm") {
      model = init_model;
      training = Json{{"method", "svm"}};
    } else if (method == "lsvm") {
      const LsvmResult r = train_lsvm_cccp(init_model, ds, tcfg);
      model = r.model;
      training = lsvm_result_json(r);
    } else {
      const SlsvmResult r = train_slsvm(init_model, ds, scfg, opt);
      model = r.model;
      training = slsvm_report_json(r.report);
    }

    std::ostringstream model_text;
    model_text << manifest.comment_line();
    write_model(model_text, model);
    const Json body{{"init", std::move(init_info)},
                    {"training", std::move(training)},
                    {"train_accuracy", bag_accuracy(model, ds)}};

    OutputSet outputs;
    outputs.write(model_out, model_text.str());
    outputs.write(report_out.empty() ? model_out + ".json" : report_out,
                  json_text(manifest, body));
    outputs.commit();
  }
};

// ---------------------------------------------------------------------- eval

struct EvalCmd {
  Common common;
  std::string data;
  std::string model_path;
  std::string out;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("eval", "Score a trained model on a dataset");
    common.add(sub);
    sub->add_option("--data", data, "Dataset file");
    sub->add_option("--model", model_path, "Model file");
    sub->add_option("--out", out, "Report output (JSON)");
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    if (model_path.empty()) throw UsageError("--model is required");
    RunManifest manifest = common.manifest("eval");
    const Dataset ds = load_input(data, common.format, manifest);
    manifest.add_input(model_path);
    const Model model = load_model(model_path);
    check_dimension(model, ds);

    Json bags = Json::array();
    int correct = 0;
    for (const Bag& bag : ds.bags) {
      const Decision d = decide(model, bag);
      correct += d.label == bag.label;
      bags.push_back(Json{{"bag_id", bag.id},
                          {"label", bag.label},
                          {"predicted", d.label},
                          {"score", d.score},
                          {"argmax", d.argmax}});
    }
    const double accuracy = bag_accuracy(model, ds);
    std::cout << "accuracy " << format_double(accuracy) << "% (" << correct << "/"
              << ds.bags.size() << " bags)\n";
    if (!out.empty()) {
      OutputSet outputs;
      outputs.write(out, json_text(manifest, Json{{"accuracy", accuracy},
                                                  {"correct", correct},
                                                  {"bags", std::move(bags)}}));
      outputs.commit();
    }
  }
};

// ------------------------------------------------------------------------ cv

struct CvCmd {
  Common common;
  std::string data;
  std::vector<std::string> methods{"lsvm", "slsvm"};
  std::string bias = "both";
  std::vector<double> c_values{0.1, 1.0, 10.0, 100.0};
  std::vector<double> mu_values{0.01, 0.1, 1.0, 10.0};
  int folds = 10;
  bool standardize = true;
  std::string lsvm_loss = "hinge";
  std::string smooth_loss = "squared_hinge";
  std::string omega = "euclidean";
  int n_top = 0;
  int max_outer = 50;
  OptConfig opt;
  std::string out_json;
  std::string out_table;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("cv", "Cross-validate over C and mu");
    common.add(sub);
    sub->add_option("--data", data, "Dataset file");
    sub->add_option("--methods", methods, "lsvm and/or slsvm")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--bias", bias, "with, without or both")->capture_default_str();
    sub->add_option("--c-values", c_values, "Grid of C values")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--mu-values", mu_values, "Grid of mu values")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--folds", folds, "Number of folds")->capture_default_str();
    sub->add_flag("--standardize,!--no-standardize", standardize,
                  "Center and normalize with training-fold statistics");
    sub->add_option("--lsvm-loss", lsvm_loss, "Loss for lsvm")->capture_default_str();
    sub->add_option("--smooth-loss", smooth_loss, "Loss for slsvm")->capture_default_str();
    sub->add_option("--omega", omega, "euclidean or entropy")->capture_default_str();
    sub->add_option("--n-top", n_top, "Top-N truncation for slsvm")->capture_default_str();
    sub->add_option("--max-outer", max_outer, "Outer iterations for lsvm")
        ->capture_default_str();
    sub->add_option("--grad-tol", opt.grad_tol, "Optimizer gradient tolerance")
        ->capture_default_str();
    sub->add_option("--max-iters", opt.max_iters, "Optimizer iteration limit")
        ->capture_default_str();
    sub->add_option("--out-json", out_json, "Report output (JSON)");
    sub->add_option("--out-table", out_table, "Table output (text); stdout always");
    sub->callback(common.wrap([this] { run(); }));
  }

  void run() {
    RunManifest manifest = common.manifest("cv");
    Dataset ds = load_input(data, common.format, manifest);
    ds.name = fs::path(data).stem().string();

    CvOptions o;
    o.methods.clear();
    for (const std::string& m : methods) o.methods.push_back(parse_method(m));
    if (bias == "both") {
      o.bias_variants = {false, true};
    } else if (bias == "with") {
      o.bias_variants = {true};
    } else if (bias == "without") {
      o.bias_variants = {false};
    } else {
      throw UsageError("unknown --bias '" + bias + "' (expected with, without or both)");
    }
    o.c_values = c_values;
    o.mu_values = mu_values;
    o.folds = folds;
    o.seed = common.seed;
    o.standardize = standardize;
    o.threads = common.threads;
    opt.validate();
    o.opt = opt;
    o.lsvm.loss = parse_loss(lsvm_loss);
    o.lsvm.max_outer = max_outer;
    o.lsvm.inner = opt;
    o.smooth.loss = parse_loss(smooth_loss);
    o.smooth.omega = parse_omega(omega);
    o.smooth.n_top = n_top;

    Json method_names = Json::array();
    for (Method m : o.methods) method_names.push_back(to_string(m));
    manifest.params["methods"] = std::move(method_names);
    manifest.params["bias"] = bias;
    manifest.params["C"] = c_values;
    manifest.params["mu"] = mu_values;
    manifest.params["folds"] = folds;
    manifest.params["standardize"] = standardize;
    manifest.params["lsvm_loss"] = to_string(o.lsvm.loss);
    manifest.params["smooth_loss"] = to_string(o.smooth.loss);
    manifest.params["omega"] = to_string(o.smooth.omega);
    manifest.params["n_top"] = n_top;
    manifest.params["max_outer"] = max_outer;
    manifest.params["optimizer"] = Json{{"memory", opt.memory},
                                        {"grad_tol", opt.grad_tol},
                                        {"max_iters", opt.max_iters}};

    const CvReport report = cross_validate(ds, o);
    const std::string table = format_cv_table(report);
    std::cout << table;
    OutputSet outputs;
    if (!out_json.empty()) outputs.write(out_json, json_text(manifest, cv_report_json(report)));
    if (!out_table.empty()) outputs.write(out_table, manifest.comment_line() + table);
    outputs.commit();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminative cover discovery and latent SVM training", "covertrain"};
  app.set_version_flag("--version", COVERTRAIN_VERSION);
  app.require_subcommand(1);

  SynthCmd synth;
  GraphCmd graph;
  CoverCmd cover;
  TrainCmd train;
  EvalCmd eval;
  CvCmd cv;
  synth.add(app);
  graph.add(app);
  cover.add(app);
  train.add(app);
  eval.add(app);
  cv.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::kUsage);
  } catch (const Error& e) {
    std::cerr << "covertrain: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "covertrain: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kData);
  }
  return 0;
}
