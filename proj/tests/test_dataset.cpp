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

#include <cstdlib>
#include <sstream>

#include "covertrain/dataset.hpp"
#include "covertrain/error.hpp"
#include "covertrain/latent_svm.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covertrain;

namespace {

Dataset parse(const std::string& text, DataFormat format = DataFormat::kDenseCsv) {
  std::istringstream in(text);
  return read_dataset(in, format, "inline");
}

void require_identical(const Dataset& a, const Dataset& b) {
  REQUIRE(a.dim == b.dim);
  REQUIRE(a.bags.size() == b.bags.size());
  for (std::size_t i = 0; i < a.bags.size(); ++i) {
    CHECK(a.bags[i].id == b.bags[i].id);
    CHECK(a.bags[i].label == b.bags[i].label);
    REQUIRE(a.bags[i].instances.rows() == b.bags[i].instances.rows());
    // Bit-exact, so compare with == rather than a tolerance.
    CHECK((a.bags[i].instances.array() == b.bags[i].instances.array()).all());
  }
}

}  // namespace

TEST_CASE("dense csv: two rows of one bag") {
  const Dataset ds = parse("1,+1,0.5,1.0\n1,+1,0.0,2.0\n");
  CHECK(ds.bags.size() == 1);
  CHECK(ds.instance_count() == 2);
  CHECK(ds.dim == 2);
  CHECK(ds.bags[0].label == 1);
  CHECK(ds.bags[0].instances(1, 1) == 2.0);
}

TEST_CASE("dense csv: labels, comments and bag order") {
  const Dataset ds = parse("# header\n7,-1,1\n3,1,2\n7,-1,3\n\n3,+1,4\n");
  REQUIRE(ds.bags.size() == 2);
  CHECK(ds.bags[0].id == 7);
  CHECK(ds.bags[0].label == -1);
  CHECK(ds.bags[0].size() == 2);
  CHECK(ds.bags[1].id == 3);
  CHECK(ds.positive_count() == 1);
  CHECK(ds.negative_count() == 1);
  CHECK(ds.find_bag(3) == 1);
  CHECK(ds.find_bag(4) == -1);
}

TEST_CASE("dense csv: malformed input is a data error") {
  CHECK_THROWS_AS(parse("1,+1,0.5,1.0\n2,-1,0.5,1.0,3.0\n"), DataError);
  CHECK_THROWS_AS(parse("1,+2,0.5\n"), DataError);
  CHECK_THROWS_AS(parse("1,+1,0.5\n1,-1,0.5\n"), DataError);
  CHECK_THROWS_AS(parse("1,+1,abc\n"), DataError);
  CHECK_THROWS_AS(parse(""), DataError);
  try {
    parse("1,+1,0.5,1.0\n2,-1,0.5\n");
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("sparse bag format") {
  const Dataset ds =
      parse("#dim 4\n5 +1 1:0.5 4:2\n5 +1\n6 -1 2:-1.25\n", DataFormat::kSparseBag);
  REQUIRE(ds.bags.size() == 2);
  CHECK(ds.dim == 4);
  CHECK(ds.bags[0].instances(0, 0) == 0.5);
  CHECK(ds.bags[0].instances(0, 3) == 2.0);
  CHECK(ds.bags[0].instances.row(1).isZero());
  CHECK(ds.bags[1].instances(0, 1) == -1.25);
  CHECK_THROWS_AS(parse("5 +1 1:0.5\n", DataFormat::kSparseBag), DataError);
  CHECK_THROWS_AS(parse("#dim 2\n5 +1 3:0.5\n", DataFormat::kSparseBag), DataError);
  CHECK_THROWS_AS(parse("#dim 2\n5 +1 0:0.5\n", DataFormat::kSparseBag), DataError);
}

TEST_CASE("format names") {
  CHECK(parse_data_format("dense-csv") == DataFormat::kDenseCsv);
  CHECK(parse_data_format("sparse-bag") == DataFormat::kSparseBag);
  CHECK_THROWS_AS(parse_data_format("xml"), UsageError);
}

TEST_CASE("round trip is bit exact in both formats") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Dataset ds = oracle::random_dataset(rng, rng.uniform_int(2, 8), 5,
                                        rng.uniform_int(1, 6), rng.uniform(1e-3, 1e3));
    // Sprinkle exact zeros and awkward values.
    ds.bags[0].instances(0, 0) = 0.0;
    ds.bags[1].instances(0, 0) = 0.1 + 0.2;
    ds.bags[1].instances(0, ds.dim - 1) = -5e-324;
    for (DataFormat f : {DataFormat::kDenseCsv, DataFormat::kSparseBag}) {
      std::stringstream io;
      write_dataset(io, ds, f);
      const Dataset back = read_dataset(io, f, "back");
      require_identical(ds, back);
    }
  }
}

TEST_CASE("standardize: hand example") {
  const Dataset ds = parse("1,+1,1,0\n1,+1,3,0\n");
  const Dataset out = standardize(ds);
  CHECK(out.bags[0].instances(0, 0) == doctest::Approx(-1.0));
  CHECK(out.bags[0].instances(1, 0) == doctest::Approx(1.0));
  CHECK(out.bags[0].instances(0, 1) == 0.0);
}

TEST_CASE("standardize: a single instance becomes the zero vector") {
  const Dataset out = standardize(parse("1,+1,4,-2,7\n"));
  CHECK(out.bags[0].instances.isZero(0.0));
}

TEST_CASE("standardize: centered means and unit rows") {
  oracle::Rng rng(5);
  Dataset ds;
  ds.dim = 5;
  Bag bag;
  bag.id = 0;
  bag.instances.resize(10, 5);
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 5; ++c) bag.instances(r, c) = 3.0 + 2.0 * rng.normal();
  }
  ds.bags.push_back(bag);
  const Standardizer st = Standardizer::fit(ds);
  const Eigen::MatrixXd centered = bag.instances.rowwise() - st.mean.transpose();
  CHECK(centered.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  const Dataset out = st.apply(ds);
  for (int r = 0; r < 10; ++r) {
    const double n = out.bags[0].instances.row(r).norm();
    CHECK((n == 0.0 || std::abs(n - 1.0) <= 1e-12));
  }
}

TEST_CASE("standardize: idempotent on standardized data") {
  oracle::Rng rng(8);
  const Dataset once = standardize(oracle::random_dataset(rng, 6, 4, 3));
  // Rows are unit norm but the mean is only approximately zero after the
  // normalization, so compare the normalization step alone.
  const Dataset twice = standardize(once);
  for (std::size_t b = 0; b < once.bags.size(); ++b) {
    for (int r = 0; r < once.bags[b].size(); ++r) {
      const double n = twice.bags[b].instances.row(r).norm();
      CHECK((n == 0.0 || std::abs(n - 1.0) < 1e-9));
    }
  }
  // Already zero-mean, unit-norm rows are fixed points.
  Dataset sym;
  sym.dim = 2;
  Bag bag;
  bag.instances.resize(4, 2);
  bag.instances << 1, 0, -1, 0, 0, 1, 0, -1;
  sym.bags.push_back(bag);
  const Dataset again = standardize(sym);
  CHECK((again.bags[0].instances - sym.bags[0].instances).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("synthetic generator") {
  SynthParams p;
  p.n_pos = 0;
  CHECK_THROWS_AS(synth_generate(p), UsageError);

  p = SynthParams{};
  p.seed = 42;
  const SyntheticData a = synth_generate(p);
  const SyntheticData b = synth_generate(p);
  require_identical(a.dataset, b.dataset);
  CHECK(a.truth == b.truth);
  CHECK(a.dataset.positive_count() == 40);
  CHECK(a.dataset.negative_count() == 40);
  CHECK(a.dataset.instance_count() == 800);
  CHECK(a.truth.size() == 40);

  std::stringstream io;
  write_ground_truth(io, a.truth);
  CHECK(read_ground_truth(io) == a.truth);
}

TEST_CASE("synthetic signal instances are linearly separable from background") {
  SynthParams p;
  p.seed = 3;
  const SyntheticData data = synth_generate(p);
  // Instance-level problem: planted signals against every other instance.
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<int> labels;
  for (const Bag& bag : data.dataset.bags) {
    for (int r = 0; r < bag.size(); ++r) {
      const auto it = data.truth.find(bag.id);
      const bool signal = it != data.truth.end() && it->second == r;
      rows.push_back(bag.instances.row(r));
      labels.push_back(signal ? 1 : -1);
    }
  }
  InstanceMatrix x(static_cast<Eigen::Index>(rows.size()), data.dataset.dim);
  for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = rows[i];
  TrainConfig cfg;
  cfg.c = 10.0;
  const Model m = train_linear_svm(x, labels, cfg, true);
  int correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double s = rows[i].dot(m.w) + m.offset();
    if ((s >= 0 ? 1 : -1) == labels[i]) ++correct;
  }
  CHECK(100.0 * correct / rows.size() >= 99.0);
}

TEST_CASE("kfold: one positive and one negative per fold") {
  oracle::Rng rng(1);
  Dataset ds;
  ds.dim = 1;
  for (int b = 0; b < 20; ++b) {
    Bag bag;
    bag.id = b;
    bag.label = b < 10 ? 1 : -1;
    bag.instances = InstanceMatrix::Zero(1, 1);
    ds.bags.push_back(bag);
  }
  const FoldSplit split = kfold_split(ds, 10, 99);
  for (int f = 0; f < 10; ++f) {
    const Dataset test = split.test(ds, f);
    CHECK(test.positive_count() == 1);
    CHECK(test.negative_count() == 1);
    CHECK(split.train(ds, f).bags.size() == 18);
  }
  CHECK(kfold_split(ds, 10, 99).assignments == split.assignments);
  CHECK_THROWS_AS(kfold_split(ds, 1, 0), UsageError);
  CHECK_THROWS_AS(kfold_split(ds, 11, 0), DataError);
}

TEST_CASE("kfold: k=2 with 3 positives splits 2 and 1") {
  Dataset ds;
  ds.dim = 1;
  for (int b = 0; b < 5; ++b) {
    Bag bag;
    bag.id = b;
    bag.label = b < 3 ? 1 : -1;
    bag.instances = InstanceMatrix::Zero(1, 1);
    ds.bags.push_back(bag);
  }
  const FoldSplit split = kfold_split(ds, 2, 0);
  std::vector<int> counts{split.test(ds, 0).positive_count(),
                          split.test(ds, 1).positive_count()};
  std::sort(counts.begin(), counts.end());
  CHECK(counts == std::vector<int>{1, 2});
}

TEST_CASE("kfold: stratification for every k in [2, 10]") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset ds = oracle::random_dataset(rng, rng.uniform_int(25, 40), 2, 1);
    const int pos = ds.positive_count();
    const int neg = ds.negative_count();
    for (int k = 2; k <= 10; ++k) {
      if (pos < k || neg < k) continue;
      const FoldSplit split = kfold_split(ds, k, static_cast<std::uint64_t>(trial));
      int total = 0;
      int min_size = 1 << 30, max_size = 0;
      for (int f = 0; f < k; ++f) {
        const Dataset test = split.test(ds, f);
        const int p = test.positive_count();
        const int n = test.negative_count();
        CHECK((p == pos / k || p == pos / k + 1));
        CHECK((n == neg / k || n == neg / k + 1));
        min_size = std::min<int>(min_size, test.bags.size());
        max_size = std::max<int>(max_size, test.bags.size());
        total += static_cast<int>(test.bags.size());
        CHECK(split.train(ds, f).bags.size() + test.bags.size() == ds.bags.size());
      }
      CHECK(total == static_cast<int>(ds.bags.size()));
      CHECK(max_size - min_size <= 1);
    }
  }
}
