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

#include "covertrain/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "covertrain/error.hpp"

namespace covertrain {

Vector Model::pack() const {
  Vector params(w.size() + (use_bias() ? 1 : 0));
  params.head(w.size()) = w;
  if (use_bias()) params[w.size()] = *bias;
  return params;
}

Model Model::unpack(const Vector& params, Eigen::Index dim, bool use_bias) {
  Model m;
  m.w = params.head(dim);
  if (use_bias) m.bias = params[dim];
  return m;
}

Vector instance_scores(const Model& model, const Bag& bag) {
  if (bag.instances.cols() != model.dim()) {
    throw DataError("model dimension " + std::to_string(model.dim()) +
                    " does not match bag dimension " +
                    std::to_string(bag.instances.cols()));
  }
  Vector s = bag.instances * model.w;
  if (model.use_bias()) s.array() += *model.bias;
  return s;
}

void check_dimension(const Model& model, const Dataset& ds) {
  if (model.dim() != ds.dim) {
    throw DataError("model dimension " + std::to_string(model.dim()) +
                    " does not match dataset dimension " +
                    std::to_string(ds.dim));
  }
}

void write_model(std::ostream& out, const Model& model) {
  out << "dim " << model.dim() << (model.use_bias() ? " bias" : "") << '\n';
  for (Eigen::Index i = 0; i < model.dim(); ++i) {
    out << format_double(model.w[i]) << '\n';
  }
  if (model.use_bias()) out << format_double(*model.bias) << '\n';
}

namespace {

double parse_weight(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DataError("model file: bad weight '" + text + "'");
  }
  return v;
}

}  // namespace

Model read_model(std::istream& in) {
  std::string line;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    body.push_back(line);
  }
  if (body.empty()) throw DataError("model file: missing header");
  std::istringstream header(body.front());
  std::string keyword, flag;
  Eigen::Index dim = 0;
  if (!(header >> keyword >> dim) || keyword != "dim" || dim <= 0) {
    throw DataError("model file: expected 'dim <d> [bias]' header");
  }
  header >> flag;
  if (!flag.empty() && flag != "bias") {
    throw DataError("model file: unexpected header token '" + flag + "'");
  }
  const bool use_bias = flag == "bias";
  const std::size_t expected =
      static_cast<std::size_t>(dim) + (use_bias ? 1 : 0);
  if (body.size() - 1 != expected) {
    throw DataError("model file: expected " + std::to_string(expected) +
                    " values, found " + std::to_string(body.size() - 1));
  }
  Model m;
  m.w.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    m.w[i] = parse_weight(body[static_cast<std::size_t>(i) + 1]);
  }
  if (use_bias) m.bias = parse_weight(body.back());
  return m;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace covertrain
