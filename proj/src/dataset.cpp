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

#include "covertrain/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "covertrain/error.hpp"

namespace covertrain {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    fail_at(line, "cannot parse number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) fail_at(line, "non-finite feature value");
  return value;
}

template <typename Int>
Int parse_integer(std::string_view token, int line, const char* what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  Int value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    fail_at(line, std::string("cannot parse ") + what + " '" +
                      std::string(token) + "'");
  }
  return value;
}

int parse_label(std::string_view token, int line) {
  token = trim(token);
  if (token == "+1" || token == "1") return 1;
  if (token == "-1") return -1;
  fail_at(line, "unknown label value '" + std::string(token) + "'");
}

// Accumulates rows into bags keyed by id while preserving first-seen order.
class BagBuilder {
 public:
  void add(BagId id, int label, std::vector<double> row, int line) {
    auto [it, inserted] = index_.try_emplace(id, entries_.size());
    if (inserted) entries_.push_back({id, label, {}});
    Entry& entry = entries_[it->second];
    if (entry.label != label) {
      fail_at(line, "bag " + std::to_string(id) + " has conflicting labels");
    }
    entry.rows.push_back(std::move(row));
  }

  Dataset finish(std::string name, Eigen::Index dim) {
    Dataset ds;
    ds.name = std::move(name);
    ds.dim = dim;
    ds.bags.reserve(entries_.size());
    for (auto& entry : entries_) {
      Bag bag;
      bag.id = entry.id;
      bag.label = entry.label;
      bag.instances.resize(static_cast<Eigen::Index>(entry.rows.size()), dim);
      for (std::size_t r = 0; r < entry.rows.size(); ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
          bag.instances(static_cast<Eigen::Index>(r), c) = entry.rows[r][c];
        }
      }
      ds.bags.push_back(std::move(bag));
    }
    return ds;
  }

  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    BagId id;
    int label;
    std::vector<std::vector<double>> rows;
  };
  std::vector<Entry> entries_;
  std::unordered_map<BagId, std::size_t> index_;
};

Dataset read_dense_csv(std::istream& in, const std::string& name) {
  BagBuilder builder;
  Eigen::Index dim = -1;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(text.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() < 3) fail_at(line, "expected bag_id,label,features...");
    const auto row_dim = static_cast<Eigen::Index>(fields.size() - 2);
    if (dim < 0) dim = row_dim;
    if (row_dim != dim) {
      fail_at(line, "dimension mismatch: expected " + std::to_string(dim) +
                        " features, found " + std::to_string(row_dim));
    }
    const auto id = parse_integer<BagId>(fields[0], line, "bag id");
    const int label = parse_label(fields[1], line);
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (Eigen::Index c = 0; c < dim; ++c) {
      row[c] = parse_real(fields[c + 2], line);
    }
    builder.add(id, label, std::move(row), line);
  }
  if (builder.empty()) throw DataError("empty dataset file");
  return builder.finish(name, dim);
}

Dataset read_sparse_bag(std::istream& in, const std::string& name) {
  BagBuilder builder;
  Eigen::Index dim = -1;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (text.rfind("#dim", 0) == 0) {
        if (dim >= 0) fail_at(line, "duplicate #dim header");
        dim = parse_integer<Eigen::Index>(text.substr(4), line, "dimension");
        if (dim <= 0) fail_at(line, "dimension must be positive");
      }
      continue;
    }
    if (dim < 0) fail_at(line, "missing '#dim d' header before data");
    std::istringstream tokens{std::string(text)};
    std::string id_token, label_token;
    if (!(tokens >> id_token >> label_token)) {
      fail_at(line, "expected 'bag_id label idx:val ...'");
    }
    const auto id = parse_integer<BagId>(id_token, line, "bag id");
    const int label = parse_label(label_token, line);
    std::vector<double> row(static_cast<std::size_t>(dim), 0.0);
    std::string entry;
    while (tokens >> entry) {
      const auto colon = entry.find(':');
      if (colon == std::string::npos) fail_at(line, "expected idx:val");
      const std::string_view view(entry);
      const auto idx =
          parse_integer<Eigen::Index>(view.substr(0, colon), line, "index");
      if (idx < 1 || idx > dim) {
        fail_at(line, "dimension mismatch: index " + std::to_string(idx) +
                          " outside [1, " + std::to_string(dim) + "]");
      }
      row[static_cast<std::size_t>(idx - 1)] =
          parse_real(view.substr(colon + 1), line);
    }
    builder.add(id, label, std::move(row), line);
  }
  if (builder.empty()) throw DataError("empty dataset file");
  return builder.finish(name, dim);
}

}  // namespace

int Dataset::positive_count() const {
  return static_cast<int>(std::count_if(
      bags.begin(), bags.end(), [](const Bag& b) { return b.positive(); }));
}

int Dataset::negative_count() const {
  return static_cast<int>(bags.size()) - positive_count();
}

Eigen::Index Dataset::instance_count() const {
  Eigen::Index n = 0;
  for (const Bag& b : bags) n += b.instances.rows();
  return n;
}

int Dataset::find_bag(BagId id) const {
  for (std::size_t i = 0; i < bags.size(); ++i) {
    if (bags[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const Bag& Dataset::bag(BagId id) const {
  const int index = find_bag(id);
  if (index < 0) throw DataError("unknown bag id " + std::to_string(id));
  return bags[static_cast<std::size_t>(index)];
}

void validate(const Dataset& ds) {
  if (ds.dim <= 0) throw DataError("dataset dimension must be positive");
  std::unordered_map<BagId, int> seen;
  for (const Bag& bag : ds.bags) {
    if (!seen.emplace(bag.id, 0).second) {
      throw DataError("duplicate bag id " + std::to_string(bag.id));
    }
    if (bag.label != 1 && bag.label != -1) {
      throw DataError("bag " + std::to_string(bag.id) + " has label " +
                      std::to_string(bag.label));
    }
    if (bag.instances.rows() == 0) {
      throw DataError("bag " + std::to_string(bag.id) + " has no instances");
    }
    if (bag.instances.cols() != ds.dim) {
      throw DataError("bag " + std::to_string(bag.id) +
                      " dimension mismatch: " +
                      std::to_string(bag.instances.cols()) + " vs " +
                      std::to_string(ds.dim));
    }
    if (!bag.instances.allFinite()) {
      throw DataError("bag " + std::to_string(bag.id) +
                      " has non-finite features");
    }
  }
}

DataFormat parse_data_format(const std::string& text) {
  if (text == "dense-csv") return DataFormat::kDenseCsv;
  if (text == "sparse-bag") return DataFormat::kSparseBag;
  throw UsageError("unknown data format '" + text +
                   "' (expected dense-csv or sparse-bag)");
}

std::string to_string(DataFormat format) {
  return format == DataFormat::kDenseCsv ? "dense-csv" : "sparse-bag";
}

Dataset read_dataset(std::istream& in, DataFormat format,
                     const std::string& name) {
  Dataset ds = format == DataFormat::kDenseCsv ? read_dense_csv(in, name)
                                               : read_sparse_bag(in, name);
  validate(ds);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file " + path.string());
  return read_dataset(in, format, path.stem().string());
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void write_dataset(std::ostream& out, const Dataset& ds, DataFormat format) {
  if (format == DataFormat::kSparseBag) out << "#dim " << ds.dim << '\n';
  for (const Bag& bag : ds.bags) {
    const char* label = bag.positive() ? "+1" : "-1";
    for (Eigen::Index r = 0; r < bag.instances.rows(); ++r) {
      if (format == DataFormat::kDenseCsv) {
        out << bag.id << ',' << label;
        for (Eigen::Index c = 0; c < ds.dim; ++c) {
          out << ',' << format_double(bag.instances(r, c));
        }
      } else {
        out << bag.id << ' ' << label;
        for (Eigen::Index c = 0; c < ds.dim; ++c) {
          const double v = bag.instances(r, c);
          // -0.0 is written so the reload stays bit-exact.
          if (v != 0.0 || std::signbit(v)) {
            out << ' ' << (c + 1) << ':' << format_double(v);
          }
        }
      }
      out << '\n';
    }
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds,
                  DataFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dataset(out, ds, format);
}

Standardizer Standardizer::fit(const Dataset& ds) {
  Standardizer s;
  s.mean = Vector::Zero(ds.dim);
  const Eigen::Index n = ds.instance_count();
  if (n == 0) return s;
  for (const Bag& bag : ds.bags) {
    s.mean += bag.instances.colwise().sum().transpose();
  }
  s.mean /= static_cast<double>(n);
  return s;
}

Dataset Standardizer::apply(const Dataset& ds) const {
  if (mean.size() != ds.dim) {
    throw DataError("standardizer dimension does not match dataset");
  }
  Dataset out = ds;
  for (Bag& bag : out.bags) {
    bag.instances.rowwise() -= mean.transpose();
    for (Eigen::Index r = 0; r < bag.instances.rows(); ++r) {
      const double norm = bag.instances.row(r).norm();
      if (norm > 0.0) bag.instances.row(r) /= norm;
    }
  }
  return out;
}

Dataset standardize(const Dataset& ds) {
  return Standardizer::fit(ds).apply(ds);
}

SyntheticData synth_generate(const SynthParams& p) {
  if (p.n_pos <= 0 || p.n_neg <= 0 || p.bag_size <= 0 || p.dim <= 0) {
    throw UsageError("synth_generate: counts must be positive");
  }
  if (!(p.signal_sep >= 0.0) || !(p.clutter_sep >= 0.0)) {
    throw UsageError("synth_generate: separations must be nonnegative");
  }
  const bool clutter = p.clutter_sep > 0.0;
  if (clutter && p.bag_size < 2) {
    throw UsageError("synth_generate: clutter needs bag_size >= 2");
  }

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Eigen::Index d) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
    return v;
  };
  auto unit_direction = [&]() {
    Vector v = gaussian(p.dim);
    while (v.norm() == 0.0) v = gaussian(p.dim);
    return Vector(v.normalized());
  };

  const Vector signal_dir = unit_direction();

  SyntheticData out;
  out.dataset.name = "synthetic";
  out.dataset.dim = p.dim;
  BagId next_id = 0;
  for (int b = 0; b < p.n_pos + p.n_neg; ++b) {
    Bag bag;
    bag.id = next_id++;
    bag.label = b < p.n_pos ? 1 : -1;
    bag.instances.resize(p.bag_size, p.dim);
    for (int r = 0; r < p.bag_size; ++r) {
      bag.instances.row(r) = gaussian(p.dim).transpose();
    }
    if (bag.positive()) {
      std::uniform_int_distribution<int> slot(0, p.bag_size - 1);
      const int signal_row = slot(rng);
      bag.instances.row(signal_row) =
          (p.signal_sep * signal_dir + gaussian(p.dim)).transpose();
      out.truth[bag.id] = signal_row;
      if (clutter) {
        const int clutter_row = (signal_row + 1 + slot(rng) % (p.bag_size - 1)) %
                                p.bag_size;
        bag.instances.row(clutter_row) =
            (p.clutter_sep * unit_direction() + gaussian(p.dim)).transpose();
      }
    }
    out.dataset.bags.push_back(std::move(bag));
  }
  return out;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  for (const auto& [bag_id, row] : truth) out << bag_id << ' ' << row << '\n';
}

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream tokens{std::string(text)};
    BagId id = 0;
    int row = 0;
    if (!(tokens >> id >> row)) fail_at(line, "expected 'bag_id instance_id'");
    truth[id] = row;
  }
  return truth;
}

namespace {

Dataset select_bags(const Dataset& ds, const FoldSplit& split, int fold,
                    bool in_fold) {
  Dataset out;
  out.name = ds.name;
  out.dim = ds.dim;
  for (const Bag& bag : ds.bags) {
    const auto it = split.assignments.find(bag.id);
    if (it == split.assignments.end()) {
      throw DataError("bag " + std::to_string(bag.id) + " has no fold");
    }
    if ((it->second == fold) == in_fold) out.bags.push_back(bag);
  }
  return out;
}

}  // namespace

Dataset FoldSplit::train(const Dataset& ds, int fold) const {
  return select_bags(ds, *this, fold, false);
}

Dataset FoldSplit::test(const Dataset& ds, int fold) const {
  return select_bags(ds, *this, fold, true);
}

FoldSplit kfold_split(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw UsageError("kfold_split: k must be at least 2");
  std::vector<BagId> pos, neg;
  for (const Bag& bag : ds.bags) (bag.positive() ? pos : neg).push_back(bag.id);
  if (static_cast<int>(pos.size()) < k || static_cast<int>(neg.size()) < k) {
    throw DataError("kfold_split: need at least " + std::to_string(k) +
                    " positive and negative bags");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  FoldSplit split;
  split.k = k;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    split.assignments[pos[i]] = static_cast<int>(i % k);
  }
  // Negatives continue where positives stopped so total sizes stay level.
  const std::size_t offset = pos.size() % static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < neg.size(); ++i) {
    split.assignments[neg[i]] = static_cast<int>((i + offset) % k);
  }
  return split;
}

}  // namespace covertrain
