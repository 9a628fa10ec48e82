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

#include "covertrain/json_io.hpp"

#include <cmath>

namespace covertrain {

namespace {

Json ref_json(const InstanceRef& ref) {
  return Json{{"bag_id", ref.bag_id}, {"instance_id", ref.instance_id}};
}

}  // namespace

Json graph_summary_json(const BipartiteGraph& graph) {
  std::size_t isolated = 0;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.edges(v).empty()) ++isolated;
  }
  return Json{{"k", graph.k()},
              {"positive_bags", graph.bag_count()},
              {"v_nodes", graph.node_count()},
              {"u_nodes", graph.node_count()},
              {"edges", graph.edge_count()},
              {"isolated_v_nodes", isolated}};
}

Json cover_result_json(const CoverResult& result, const BipartiteGraph& graph,
                       const CoverConfig& cfg) {
  Json selected = Json::array();
  for (std::size_t i = 0; i < result.selected.size(); ++i) {
    const NodeId v = result.selected[i];
    Json entry = ref_json(graph.node(v));
    entry["node"] = v;
    entry["gain"] = result.gains[i];
    entry["degree"] = graph.edges(v).size();
    selected.push_back(std::move(entry));
  }
  Json covered = Json::array();
  for (const auto& [bag_id, ids] : result.covered) {
    covered.push_back(Json{{"bag_id", bag_id},
                           {"instances", std::vector<int>(ids.begin(), ids.end())}});
  }
  Json config{{"t", cfg.t},
              {"alpha", cfg.alpha},
              {"g", to_string(cfg.g)},
              {"k", cfg.k}};
  const bool min_cost = cfg.t == 1 && cfg.g == ConcaveFn::kIdentity;
  config["mode"] = min_cost ? "min-cost-cover" : "multi-cover";
  Json out{{"config", std::move(config)},
           {"f_total", result.f_total},
           {"f_final", result.f_final},
           {"target", cfg.alpha * result.f_total},
           {"satisfied", result.f_final >= cfg.alpha * result.f_total},
           {"selected", std::move(selected)},
           {"covered", std::move(covered)}};
  double bound = 0.0;
  try {
    bound = approx_bound(cfg);
    out["approx_bound"] = bound;
  } catch (const std::exception&) {
    out["approx_bound"] = nullptr;
  }
  return out;
}

Json opt_report_json(const OptReport& report) {
  return Json{{"iterations", report.iterations},
              {"evaluations", report.evaluations},
              {"final_grad_norm", report.final_grad_norm},
              {"termination", to_string(report.termination)},
              {"objective", report.trace},
              {"grad_norm", report.grad_norms}};
}

Json lsvm_result_json(const LsvmResult& result) {
  Json inner = Json::array();
  for (const OptReport& r : result.inner_reports) {
    inner.push_back(Json{{"iterations", r.iterations},
                         {"termination", to_string(r.termination)},
                         {"final_grad_norm", r.final_grad_norm}});
  }
  return Json{{"method", "lsvm"},
              {"outer_iterations", result.outer_iterations},
              {"converged", result.converged},
              {"objective", result.trace},
              {"hinge_objective", result.hinge_trace},
              {"inner", std::move(inner)}};
}

Json slsvm_report_json(const TrainReport& report) {
  Json iterations = Json::array();
  for (std::size_t i = 0; i < report.opt.trace.size(); ++i) {
    Json row{{"iteration", i},
             {"objective", report.opt.trace[i]},
             {"grad_norm", report.opt.grad_norms[i]}};
    if (i < report.certification_rate.size()) {
      row["certification_rate"] = report.certification_rate[i];
    }
    iterations.push_back(std::move(row));
  }
  return Json{{"method", "slsvm"},
              {"iterations", report.opt.iterations},
              {"evaluations", report.opt.evaluations},
              {"final_grad_norm", report.opt.final_grad_norm},
              {"termination", to_string(report.opt.termination)},
              {"trace", std::move(iterations)}};
}

Json cv_report_json(const CvReport& report) {
  Json cells = Json::array();
  for (const CvCell& cell : report.cells) {
    Json row{{"method", to_string(cell.method)},
             {"bias", cell.bias},
             {"C", cell.c},
             {"mu", cell.method == Method::kSlsvm ? Json(cell.mu) : Json(nullptr)}};
    if (cell.ok()) {
      row["mean"] = cell.mean;
      row["std"] = cell.stddev;
      row["fold_accuracy"] = cell.fold_accuracy;
    } else {
      row["error"] = cell.error;
    }
    cells.push_back(std::move(row));
  }
  Json best = Json::object();
  for (Method m : {Method::kLsvm, Method::kSlsvm}) {
    for (bool bias : {false, true}) {
      const int i = report.best_for(m, bias);
      if (i < 0) continue;
      best[to_string(m) + (bias ? "_bias" : "_nobias")] = i;
    }
  }
  return Json{{"dataset", report.dataset},
              {"folds", report.folds},
              {"seed", report.seed},
              {"best", report.best},
              {"best_by_column", std::move(best)},
              {"cells", std::move(cells)}};
}

}  // namespace covertrain
