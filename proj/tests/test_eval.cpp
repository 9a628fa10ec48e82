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

#include "covertrain/error.hpp"
#include "covertrain/eval.hpp"
#include "covertrain/json_io.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covertrain;

namespace {

Dataset small_synthetic(std::uint64_t seed) {
  SynthParams p;
  p.n_pos = 9;
  p.n_neg = 9;
  p.bag_size = 6;
  p.dim = 5;
  p.signal_sep = 8.0;
  p.seed = seed;
  Dataset ds = synth_generate(p).dataset;
  ds.name = "synth";
  return ds;
}

CvOptions small_grid() {
  CvOptions o;
  o.c_values = {1.0, 10.0};
  o.mu_values = {0.1, 1.0};
  o.bias_variants = {true};
  o.folds = 3;
  o.seed = 4;
  o.standardize = false;
  return o;
}

}  // namespace

TEST_CASE("bag accuracy examples") {
  oracle::Rng rng(81);
  Dataset ds = oracle::random_dataset(rng, 10, 3, 2);
  Dataset all_pos = ds;
  for (Bag& bag : all_pos.bags) bag.label = 1;
  Model plus = Model::zeros(2, true);
  *plus.bias = 1.0;
  CHECK(bag_accuracy(plus, all_pos) == 100.0);

  Dataset balanced = ds;
  for (std::size_t i = 0; i < balanced.bags.size(); ++i) {
    balanced.bags[i].label = i % 2 == 0 ? 1 : -1;
  }
  CHECK(bag_accuracy(Model::zeros(2, true), balanced) == 50.0);
  CHECK_THROWS_AS(bag_accuracy(Model::zeros(3, true), ds), DataError);
  CHECK_THROWS_AS(bag_accuracy(plus, Dataset{}), DataError);
}

TEST_CASE("bag accuracy matches a per-bag scan") {
  oracle::Rng rng(82);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = oracle::random_dataset(rng, 15, 5, 3);
    const Model m = oracle::random_model(rng, 3, true);
    int correct = 0;
    for (const Bag& bag : ds.bags) {
      double best = -INFINITY;
      for (int r = 0; r < bag.size(); ++r) {
        best = std::max(best, bag.instances.row(r).dot(m.w) + *m.bias);
      }
      correct += (best >= 0 ? 1 : -1) == bag.label;
    }
    CHECK(bag_accuracy(m, ds) == doctest::Approx(100.0 * correct / ds.bags.size()));
  }
}

TEST_CASE("method names") {
  CHECK(parse_method("slsvm") == Method::kSlsvm);
  CHECK(to_string(Method::kLsvm) == "lsvm");
  CHECK_THROWS_AS(parse_method("svm"), UsageError);
}

TEST_CASE("cross validation: counts, separable accuracy, determinism") {
  const Dataset ds = small_synthetic(2);
  const CvOptions o = small_grid();
  const CvReport r = cross_validate(ds, o);
  CHECK(r.folds == 3);
  CHECK(r.cells.size() == 8);
  int lsvm = 0, slsvm = 0;
  for (const CvCell& cell : r.cells) {
    REQUIRE(cell.ok());
    CHECK(cell.fold_accuracy.size() == 3);
    CHECK(cell.mean >= 0.0);
    CHECK(cell.mean <= 100.0);
    CHECK(cell.stddev >= 0.0);
    (cell.method == Method::kLsvm ? lsvm : slsvm)++;
  }
  CHECK(lsvm == 4);
  CHECK(slsvm == 4);
  for (const CvCell& cell : r.cells) {
    INFO(to_string(cell.method), " C=", cell.c, " mu=", cell.mu);
    CHECK(cell.mean == 100.0);
    CHECK(cell.stddev == 0.0);
  }
  CHECK(r.best == 0);

  const CvReport again = cross_validate(ds, o);
  CHECK(cv_report_json(again).dump() == cv_report_json(r).dump());
}

TEST_CASE("cross validation: independent of grid order and thread count") {
  const Dataset ds = small_synthetic(3);
  CvOptions o = small_grid();
  const std::string base = cv_report_json(cross_validate(ds, o)).dump();
  CvOptions shuffled = o;
  shuffled.c_values = {10.0, 1.0};
  shuffled.mu_values = {1.0, 0.1};
  shuffled.methods = {Method::kSlsvm, Method::kLsvm};
  CHECK(cv_report_json(cross_validate(ds, shuffled)).dump() == base);
  CvOptions threaded = o;
  threaded.threads = 3;
  CHECK(cv_report_json(cross_validate(ds, threaded)).dump() == base);
}

TEST_CASE("cross validation: mean and sample deviation over the folds") {
  const Dataset ds = small_synthetic(7);
  CvOptions o = small_grid();
  o.standardize = true;
  o.bias_variants = {false};
  const CvReport r = cross_validate(ds, o);
  for (const CvCell& cell : r.cells) {
    REQUIRE(cell.ok());
    double mean = 0.0;
    for (double a : cell.fold_accuracy) mean += a / 3.0;
    double ss = 0.0;
    for (double a : cell.fold_accuracy) ss += (a - mean) * (a - mean);
    CHECK(cell.mean == doctest::Approx(mean));
    CHECK(cell.stddev == doctest::Approx(std::sqrt(ss / 2.0)));
  }
}

TEST_CASE("cross validation: bad grid and table layout") {
  const Dataset ds = small_synthetic(1);
  CvOptions o = small_grid();
  o.c_values.clear();
  CHECK_THROWS_AS(cross_validate(ds, o), UsageError);
  o = small_grid();
  o.folds = 20;
  CHECK_THROWS_AS(cross_validate(ds, o), DataError);

  const std::string table = format_cv_table(cross_validate(ds, small_grid()));
  CHECK(table.find("LSVM w/ bias") != std::string::npos);
  CHECK(table.find("SLSVM w/ bias") != std::string::npos);
  CHECK(table.find("synth") != std::string::npos);
  CHECK(table.find("+-") != std::string::npos);
}
