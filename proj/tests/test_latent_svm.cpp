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

#include <cmath>
#include <sstream>

#include "covertrain/error.hpp"
#include "covertrain/latent_svm.hpp"
#include "covertrain/loss.hpp"
#include "covertrain/model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covertrain;

namespace {

// Per-term objective: every instance score by hand, bag max by scan.
double objective_oracle(const Model& m, const Dataset& ds, LossKind loss, double c) {
  double data = 0.0;
  for (const Bag& bag : ds.bags) {
    double best = -INFINITY;
    for (int r = 0; r < bag.size(); ++r) {
      double s = m.offset();
      for (Eigen::Index j = 0; j < ds.dim; ++j) s += m.w[j] * bag.instances(r, j);
      best = std::max(best, s);
    }
    const double margin = 1.0 - bag.label * best;
    switch (loss) {
      case LossKind::kHinge: data += std::max(0.0, margin); break;
      case LossKind::kSquaredHinge: data += std::pow(std::max(0.0, margin), 2); break;
      case LossKind::kLogistic: data += std::log(1.0 + std::exp(-bag.label * best)); break;
    }
  }
  return 0.5 * m.w.squaredNorm() + c * data;
}

Dataset toy_separable() {
  Dataset ds;
  ds.dim = 2;
  for (int b = 0; b < 6; ++b) {
    Bag bag;
    bag.id = b;
    bag.label = b < 3 ? 1 : -1;
    bag.instances.resize(1, 2);
    bag.instances << (b < 3 ? 2.0 + b : -2.0 - b), 0.3 * b;
    ds.bags.push_back(bag);
  }
  return ds;
}

}  // namespace

TEST_CASE("decision examples") {
  Bag bag;
  bag.instances.resize(2, 1);
  bag.instances << -1.0, 2.0;
  const Decision zero = decide(Model::zeros(1, true), bag);
  CHECK(zero.score == 0.0);
  CHECK(zero.label == 1);
  CHECK(zero.argmax == 0);
  Model m = Model::zeros(1, false);
  m.w[0] = 1.0;
  const Decision d = decide(m, bag);
  CHECK(d.label == 1);
  CHECK(d.score == 2.0);
  CHECK(d.argmax == 1);
}

TEST_CASE("decision matches an exhaustive scan and is scale invariant") {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset ds = oracle::random_dataset(rng, 2, 8, 4);
    const Model m = oracle::random_model(rng, 4, rng.coin());
    const Bag& bag = ds.bags[0];
    int arg = 0;
    double best = -INFINITY;
    for (int r = 0; r < bag.size(); ++r) {
      const double s = bag.instances.row(r).dot(m.w) + m.offset();
      if (s > best) {
        best = s;
        arg = r;
      }
    }
    const Decision d = decide(m, bag);
    CHECK(d.argmax == arg);
    CHECK(d.score == doctest::Approx(best).epsilon(1e-12));
    CHECK(d.label == (best >= 0 ? 1 : -1));

    const double scale = std::pow(10.0, rng.uniform(-3, 3));
    Model scaled = m;
    scaled.w *= scale;
    if (scaled.bias) *scaled.bias *= scale;
    const Decision ds2 = decide(scaled, bag);
    CHECK(ds2.argmax == d.argmax);
    if (d.score != 0.0) CHECK(ds2.label == d.label);
  }
}

TEST_CASE("objective examples") {
  oracle::Rng rng(62);
  const Dataset ds = oracle::random_dataset(rng, 9, 4, 3);
  TrainConfig cfg;
  cfg.c = 2.5;
  CHECK(lsvm_objective(Model::zeros(3, true), ds, cfg) == doctest::Approx(2.5 * 9));

  Dataset neg;
  neg.dim = 1;
  Bag bag;
  bag.label = -1;
  bag.instances.resize(2, 1);
  bag.instances << -4.0, -2.0;
  neg.bags.push_back(bag);
  Model m = Model::zeros(1, false);
  m.w[0] = 1.0;
  CHECK(lsvm_objective(m, neg, cfg) == doctest::Approx(0.5));
}

TEST_CASE("objective matches the per-term oracle") {
  oracle::Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset ds = oracle::random_dataset(rng, rng.uniform_int(2, 10), 6, 5);
    const Model m = oracle::random_model(rng, 5, rng.coin(), 0.5);
    for (LossKind loss : {LossKind::kHinge, LossKind::kSquaredHinge, LossKind::kLogistic}) {
      TrainConfig cfg;
      cfg.loss = loss;
      cfg.c = rng.uniform(0.1, 10.0);
      CHECK(lsvm_objective(m, ds, cfg) ==
            doctest::Approx(objective_oracle(m, ds, loss, cfg.c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-instance bags reduce to a standard SVM") {
  oracle::Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = oracle::random_dataset(rng, 12, 1, 3);
    const Model m = oracle::random_model(rng, 3, true);
    TrainConfig cfg;
    cfg.c = 3.0;
    double svm = 0.5 * m.w.squaredNorm();
    for (const Bag& bag : ds.bags) {
      svm += cfg.c * std::max(0.0, 1.0 - bag.label * (bag.instances.row(0).dot(m.w) + *m.bias));
    }
    CHECK(lsvm_objective(m, ds, cfg) == doctest::Approx(svm).epsilon(1e-12));
  }
}

TEST_CASE("loss functions") {
  CHECK(loss_value(LossKind::kHinge, 1, 0.0) == 1.0);
  CHECK(loss_value(LossKind::kSquaredHinge, -1, 0.5) == 2.25);
  CHECK(loss_derivative(LossKind::kSquaredHinge, 1, 0.25) == -1.5);
  CHECK(loss_value(LossKind::kLogistic, 1, 800.0) == 0.0);
  CHECK(loss_value(LossKind::kLogistic, 1, -800.0) == doctest::Approx(800.0));
  CHECK(std::isfinite(loss_derivative(LossKind::kLogistic, -1, 1e4)));
  CHECK(parse_loss("squared-hinge") == LossKind::kSquaredHinge);
  CHECK_THROWS_AS(parse_loss("huber"), UsageError);
  for (LossKind k : {LossKind::kSquaredHinge, LossKind::kLogistic}) {
    for (double s : {-2.0, -0.3, 0.4, 0.99, 3.0}) {
      for (int y : {-1, 1}) {
        const double fd = (loss_value(k, y, s + 1e-6) - loss_value(k, y, s - 1e-6)) / 2e-6;
        CHECK(loss_derivative(k, y, s) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("initial svm: separable toy set is fit perfectly") {
  const Dataset ds = toy_separable();
  TrainConfig cfg;
  cfg.c = 10.0;
  for (bool bias : {false, true}) {
    const Model m = train_initial_svm_bag_average(ds, cfg, bias);
    CHECK(m.use_bias() == bias);
    for (const Bag& bag : ds.bags) CHECK(decide(m, bag).label == bag.label);
  }
}

TEST_CASE("initial svm: identical features give a near-zero w") {
  Dataset ds;
  ds.dim = 3;
  for (int b = 0; b < 4; ++b) {
    Bag bag;
    bag.id = b;
    bag.label = b % 2 == 0 ? 1 : -1;
    bag.instances = InstanceMatrix::Constant(1, 3, 0.7);
    ds.bags.push_back(bag);
  }
  const Model m = train_initial_svm_bag_average(ds, TrainConfig{}, false);
  CHECK(m.w.norm() < 1e-6);
}

TEST_CASE("initial svm: gradient vanishes at the returned model") {
  oracle::Rng rng(65);
  const Dataset ds = oracle::random_dataset(rng, 14, 5, 4);
  TrainConfig cfg;
  cfg.c = 2.0;
  cfg.inner.grad_tol = 1e-8;
  std::vector<InstanceRef> pos;
  for (const Bag& bag : ds.bags) {
    if (bag.positive()) pos.push_back({bag.id, bag.size() - 1});
  }
  const Model m = train_initial_svm(ds, pos, cfg, true);
  // Gradient of the squared-hinge SVM over the constructed examples.
  Vector gw = m.w;
  double gb = 0.0;
  auto add = [&](const auto& x, int y) {
    const double s = x.dot(m.w) + *m.bias;
    const double d = cfg.c * -2.0 * y * std::max(0.0, 1.0 - y * s);
    gw += d * x.transpose();
    gb += d;
  };
  for (const InstanceRef& r : pos) add(ds.bag(r.bag_id).instances.row(r.instance_id), 1);
  for (const Bag& bag : ds.bags) {
    if (bag.positive()) continue;
    for (int r = 0; r < bag.size(); ++r) add(bag.instances.row(r), -1);
  }
  Vector g(gw.size() + 1);
  g << gw, gb;
  CHECK(g.norm() <= cfg.inner.grad_tol * 10);
}

TEST_CASE("initial svm: data errors") {
  oracle::Rng rng(66);
  const Dataset ds = oracle::random_dataset(rng, 4, 3, 2);
  const std::vector<InstanceRef> bad{{0, 99}};
  CHECK_THROWS_AS(train_initial_svm(ds, bad, TrainConfig{}, false), DataError);
  Dataset only_neg = ds;
  for (Bag& bag : only_neg.bags) bag.label = -1;
  CHECK_THROWS_AS(train_initial_svm_bag_average(only_neg, TrainConfig{}, false), DataError);
}

TEST_CASE("cccp: monotone traces and a stable fixed point") {
  oracle::Rng rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const Dataset ds = oracle::random_dataset(rng, rng.uniform_int(6, 16), 6, 4);
    TrainConfig cfg;
    cfg.c = std::pow(10.0, rng.uniform(-1, 2));
    cfg.loss = trial % 3 == 0 ? LossKind::kLogistic : LossKind::kHinge;
    const bool bias = rng.coin();
    const Model init = train_initial_svm_bag_average(ds, cfg, bias);
    const LsvmResult r = train_lsvm_cccp(init, ds, cfg);
    REQUIRE(r.trace.size() == static_cast<std::size_t>(r.outer_iterations) + 1);
    CHECK(r.hinge_trace.size() == r.trace.size());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i] <= r.trace[i - 1] + 1e-9);
    }
    CHECK(r.trace.back() <= r.trace.front());
    if (r.converged) {
      // Restarting at the fixed point keeps every latent choice and stops
      // after a single outer step.
      const LsvmResult again = train_lsvm_cccp(r.model, ds, cfg);
      CHECK(again.outer_iterations == 1);
      CHECK(impute_latent(again.model, ds) == impute_latent(r.model, ds));
    }
  }
}

TEST_CASE("cccp on planted-signal data improves the objective") {
  SynthParams p;
  p.n_pos = 15;
  p.n_neg = 15;
  p.seed = 9;
  const Dataset ds = synth_generate(p).dataset;
  TrainConfig cfg;
  const Model init = train_initial_svm_bag_average(ds, cfg, true);
  const LsvmResult r = train_lsvm_cccp(init, ds, cfg);
  CHECK(r.trace.back() <= r.trace.front());
  CHECK(r.hinge_trace.back() <= r.hinge_trace.front() + 1e-9);
  int correct = 0;
  for (const Bag& bag : ds.bags) correct += decide(r.model, bag).label == bag.label;
  CHECK(correct == static_cast<int>(ds.bags.size()));
}

TEST_CASE("model text format round trip") {
  oracle::Rng rng(68);
  for (bool bias : {false, true}) {
    const Model m = oracle::random_model(rng, 7, bias, 1e3);
    std::stringstream io;
    io << "# comment\n";
    write_model(io, m);
    const Model back = read_model(io);
    CHECK(back.use_bias() == bias);
    CHECK((back.w.array() == m.w.array()).all());
    if (bias) CHECK(*back.bias == *m.bias);
  }
  std::istringstream bad("dim 2\n1.0\n");
  CHECK_THROWS_AS(read_model(bad), DataError);
  oracle::Rng r2(1);
  const Dataset ds = oracle::random_dataset(r2, 3, 2, 4);
  CHECK_THROWS_AS(check_dimension(Model::zeros(3, false), ds), DataError);
}

TEST_CASE("pack and unpack") {
  Model m = Model::zeros(3, true);
  m.w << 1, 2, 3;
  *m.bias = 4;
  const Vector p = m.pack();
  CHECK(p.size() == 4);
  const Model back = Model::unpack(p, 3, true);
  CHECK(back.w == m.w);
  CHECK(*back.bias == 4.0);
  CHECK(Model::unpack(p.head(3), 3, false).use_bias() == false);
}
