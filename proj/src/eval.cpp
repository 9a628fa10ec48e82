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

#include "covertrain/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <thread>

#include "covertrain/error.hpp"

namespace covertrain {

double bag_accuracy(const Model& model, const Dataset& ds) {
  if (ds.bags.empty()) throw DataError("bag_accuracy: empty dataset");
  check_dimension(model, ds);
  int correct = 0;
  for (const Bag& bag : ds.bags) {
    if (decide(model, bag).label == bag.label) ++correct;
  }
  return 100.0 * correct / static_cast<double>(ds.bags.size());
}

Method parse_method(const std::string& text) {
  if (text == "lsvm") return Method::kLsvm;
  if (text == "slsvm") return Method::kSlsvm;
  throw UsageError("unknown method '" + text + "' (expected lsvm or slsvm)");
}

std::string to_string(Method method) {
  return method == Method::kLsvm ? "lsvm" : "slsvm";
}

int CvReport::best_for(Method method, bool bias) const {
  int best_index = -1;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CvCell& cell = cells[i];
    if (!cell.ok() || cell.method != method || cell.bias != bias) continue;
    if (best_index < 0 || cell.mean > cells[best_index].mean) {
      best_index = static_cast<int>(i);
    }
  }
  return best_index;
}

namespace {

// Outcome of one training run on one fold.
struct FoldOutcome {
  double accuracy = 0.0;
  std::string error;
};

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

CvReport cross_validate(const Dataset& ds, const CvOptions& options) {
  if (options.methods.empty() || options.bias_variants.empty() ||
      options.c_values.empty() || options.mu_values.empty()) {
    throw UsageError("cross_validate: empty grid");
  }
  const std::vector<double> cs = sorted_unique(options.c_values);
  const std::vector<double> mus = sorted_unique(options.mu_values);
  std::vector<Method> methods = options.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<bool> biases = options.bias_variants;
  std::sort(biases.begin(), biases.end());
  biases.erase(std::unique(biases.begin(), biases.end()), biases.end());
  const bool want_lsvm =
      std::find(methods.begin(), methods.end(), Method::kLsvm) != methods.end();
  const bool want_slsvm =
      std::find(methods.begin(), methods.end(), Method::kSlsvm) != methods.end();

  const FoldSplit split = kfold_split(ds, options.folds, options.seed);
  const int k = options.folds;

  // Task = (fold, bias, C). Each produces one LSVM outcome and one SLSVM
  // outcome per mu, all from the same initial model.
  struct Task {
    int fold;
    std::size_t bias;
    std::size_t c;
  };
  std::vector<Task> tasks;
  for (int f = 0; f < k; ++f) {
    for (std::size_t b = 0; b < biases.size(); ++b) {
      for (std::size_t c = 0; c < cs.size(); ++c) tasks.push_back({f, b, c});
    }
  }
  std::vector<FoldOutcome> lsvm_out(tasks.size());
  std::vector<std::vector<FoldOutcome>> slsvm_out(
      tasks.size(), std::vector<FoldOutcome>(mus.size()));

  // Standardized folds are shared by every task on that fold.
  std::vector<Dataset> train_sets(static_cast<std::size_t>(k));
  std::vector<Dataset> test_sets(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    Dataset train = split.train(ds, f);
    Dataset test = split.test(ds, f);
    if (options.standardize) {
      const Standardizer st = Standardizer::fit(train);
      train = st.apply(train);
      test = st.apply(test);
    }
    train_sets[static_cast<std::size_t>(f)] = std::move(train);
    test_sets[static_cast<std::size_t>(f)] = std::move(test);
  }

  auto run = [&](std::size_t t) {
    const Task& task = tasks[t];
    const Dataset& train = train_sets[static_cast<std::size_t>(task.fold)];
    const Dataset& test = test_sets[static_cast<std::size_t>(task.fold)];
    const bool bias = biases[task.bias];
    TrainConfig lcfg = options.lsvm;
    lcfg.c = cs[task.c];
    std::optional<Model> init;
    std::string init_error;
    try {
      init = train_initial_svm_bag_average(train, lcfg, bias);
    } catch (const std::exception& e) {
      init_error = std::string("initialization: ") + e.what();
    }
    if (want_lsvm) {
      if (!init) {
        lsvm_out[t].error = init_error;
      } else {
        try {
          const LsvmResult r = train_lsvm_cccp(*init, train, lcfg);
          lsvm_out[t].accuracy = bag_accuracy(r.model, test);
        } catch (const std::exception& e) {
          lsvm_out[t].error = e.what();
        }
      }
    }
    if (want_slsvm) {
      for (std::size_t m = 0; m < mus.size(); ++m) {
        FoldOutcome& o = slsvm_out[t][m];
        if (!init) {
          o.error = init_error;
          continue;
        }
        SmoothConfig scfg = options.smooth;
        scfg.c = cs[task.c];
        scfg.mu = mus[m];
        try {
          const SlsvmResult r = train_slsvm(*init, train, scfg, options.opt);
          o.accuracy = bag_accuracy(r.model, test);
        } catch (const std::exception& e) {
          o.error = e.what();
        }
      }
    }
  };

  const int workers = std::max(1, options.threads);
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run(t);
      });
    }
  }

  auto task_index = [&](int fold, std::size_t b, std::size_t c) {
    return (static_cast<std::size_t>(fold) * biases.size() + b) * cs.size() + c;
  };
  auto finish = [&](CvCell& cell, auto&& outcome_at) {
    for (int f = 0; f < k; ++f) {
      const FoldOutcome& o = outcome_at(f);
      if (!o.error.empty()) {
        if (cell.error.empty()) {
          cell.error = "fold " + std::to_string(f) + ": " + o.error;
        }
        continue;
      }
      cell.fold_accuracy.push_back(o.accuracy);
    }
    if (!cell.ok()) return;
    double sum = 0.0;
    for (double a : cell.fold_accuracy) sum += a;
    cell.mean = sum / k;
    double ss = 0.0;
    for (double a : cell.fold_accuracy) ss += (a - cell.mean) * (a - cell.mean);
    cell.stddev = k > 1 ? std::sqrt(ss / (k - 1)) : 0.0;
  };

  CvReport report;
  report.dataset = ds.name;
  report.folds = k;
  report.seed = options.seed;
  for (Method method : methods) {
    for (std::size_t b = 0; b < biases.size(); ++b) {
      for (std::size_t c = 0; c < cs.size(); ++c) {
        for (std::size_t m = 0; m < mus.size(); ++m) {
          CvCell cell;
          cell.method = method;
          cell.bias = biases[b];
          cell.c = cs[c];
          cell.mu = mus[m];
          if (method == Method::kLsvm) {
            finish(cell, [&](int f) -> const FoldOutcome& {
              return lsvm_out[task_index(f, b, c)];
            });
          } else {
            finish(cell, [&](int f) -> const FoldOutcome& {
              return slsvm_out[task_index(f, b, c)][m];
            });
          }
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const CvCell& cell = report.cells[i];
    if (cell.ok() && (report.best < 0 || cell.mean > report.cells[report.best].mean)) {
      report.best = static_cast<int>(i);
    }
  }
  return report;
}

namespace {

std::string fixed(double v, int precision = 1) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_cv_table(const CvReport& report) {
  std::ostringstream out;
  const std::size_t name_width =
      std::max<std::size_t>(10, report.dataset.size() + 2);
  const std::size_t col = 18;
  out << pad("Dataset", name_width);
  const std::pair<Method, bool> columns[] = {{Method::kLsvm, false},
                                             {Method::kSlsvm, false},
                                             {Method::kLsvm, true},
                                             {Method::kSlsvm, true}};
  for (const auto& [method, bias] : columns) {
    const std::string head = (method == Method::kLsvm ? "LSVM" : "SLSVM") +
                             std::string(bias ? " w/ bias" : " w/o bias");
    out << pad(head, col);
  }
  out << '\n' << pad(report.dataset, name_width);
  for (const auto& [method, bias] : columns) {
    const int i = report.best_for(method, bias);
    const std::string text =
        i < 0 ? "-"
              : fixed(report.cells[i].mean) + " +- " + fixed(report.cells[i].stddev);
    out << pad(text, col);
  }
  out << "\n\n";
  out << pad("method", 8) << pad("bias", 6) << pad("C", 10) << pad("mu", 10)
      << "accuracy (" << report.folds << "-fold, seed " << report.seed << ")\n";
  for (const CvCell& cell : report.cells) {
    out << pad(to_string(cell.method), 8) << pad(cell.bias ? "yes" : "no", 6)
        << pad(format_double(cell.c), 10)
        << pad(cell.method == Method::kLsvm ? "-" : format_double(cell.mu), 10);
    if (cell.ok()) {
      out << fixed(cell.mean) << " +- " << fixed(cell.stddev);
    } else {
      out << "failed: " << cell.error;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace covertrain
