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

// Bags of feature vectors: the multiple-instance corpus and its text formats.

#ifndef COVERTRAIN_DATASET_HPP_
#define COVERTRAIN_DATASET_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace covertrain {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
// One instance per row. Row-major so a single instance is contiguous.
using InstanceMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using BagId = std::int64_t;

// Addresses one instance: the bag it lives in and its row within that bag.
struct InstanceRef {
  BagId bag_id = 0;
  int instance_id = 0;

  auto operator<=>(const InstanceRef&) const = default;
};

struct Bag {
  BagId id = 0;
  int label = 1;  // +1 or -1
  InstanceMatrix instances;

  bool positive() const { return label > 0; }
  int size() const { return static_cast<int>(instances.rows()); }
};

struct Dataset {
  std::string name;
  Eigen::Index dim = 0;
  std::vector<Bag> bags;

  int positive_count() const;
  int negative_count() const;
  Eigen::Index instance_count() const;
  // Index into `bags`, or -1 when the id is unknown.
  int find_bag(BagId id) const;
  const Bag& bag(BagId id) const;
};

// Throws DataError when a bag is empty, a label is not +-1, a row has the
// wrong dimension, an entry is not finite or bag ids repeat.
void validate(const Dataset& ds);

enum class DataFormat { kDenseCsv, kSparseBag };

DataFormat parse_data_format(const std::string& text);
std::string to_string(DataFormat format);

// Bags are grouped by id in order of first appearance; instance order is
// preserved. Errors carry the offending line number.
Dataset read_dataset(std::istream& in, DataFormat format,
                     const std::string& name = "");
Dataset load_dataset(const std::filesystem::path& path, DataFormat format);

// Shortest round-trip decimal text, so a reload is bit-exact.
void write_dataset(std::ostream& out, const Dataset& ds, DataFormat format);
void save_dataset(const std::filesystem::path& path, const Dataset& ds,
                  DataFormat format);

// Formats a double with the shortest representation that parses back to the
// identical value.
std::string format_double(double value);

// Per-dimension centering learned from one dataset and applied to others.
struct Standardizer {
  Vector mean;

  static Standardizer fit(const Dataset& ds);
  // Centers with the stored mean, then scales every instance to unit l2
  // norm. Instances that are exactly zero after centering stay zero.
  Dataset apply(const Dataset& ds) const;
};

// Center-then-normalize using statistics of `ds` itself.
Dataset standardize(const Dataset& ds);

// Planted-signal generator. Ground truth maps positive bag id to the row of
// its signal instance.
using GroundTruth = std::map<BagId, int>;

struct SynthParams {
  int n_pos = 40;
  int n_neg = 40;
  int bag_size = 10;
  int dim = 10;
  double signal_sep = 6.0;
  // When positive, every positive bag also carries one clutter instance at
  // this distance from the origin along a direction private to that bag.
  double clutter_sep = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset dataset;
  GroundTruth truth;
};

SyntheticData synth_generate(const SynthParams& params);

void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& in);

struct FoldSplit {
  int k = 0;
  std::map<BagId, int> assignments;

  // Bags of `ds` whose fold equals (or differs from) `fold`, in dataset order.
  Dataset train(const Dataset& ds, int fold) const;
  Dataset test(const Dataset& ds, int fold) const;
};

// Stratified: positives and negatives are each dealt round-robin after a
// seeded shuffle, so fold sizes and per-class counts differ by at most one.
FoldSplit kfold_split(const Dataset& ds, int k, std::uint64_t seed);

}  // namespace covertrain

#endif  // COVERTRAIN_DATASET_HPP_
