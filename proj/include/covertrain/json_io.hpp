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

// JSON views of the result types, used for every machine-readable output.

#ifndef COVERTRAIN_JSON_IO_HPP_
#define COVERTRAIN_JSON_IO_HPP_

#include "json.hpp"

#include "covertrain/eval.hpp"
#include "covertrain/latent_svm.hpp"
#include "covertrain/neighbor_graph.hpp"
#include "covertrain/smooth_lsvm.hpp"
#include "covertrain/submodular_cover.hpp"

namespace covertrain {

using Json = nlohmann::ordered_json;

Json graph_summary_json(const BipartiteGraph& graph);
Json cover_result_json(const CoverResult& result, const BipartiteGraph& graph,
                       const CoverConfig& cfg);
Json opt_report_json(const OptReport& report);
Json lsvm_result_json(const LsvmResult& result);
Json slsvm_report_json(const TrainReport& report);
Json cv_report_json(const CvReport& report);

}  // namespace covertrain

#endif  // COVERTRAIN_JSON_IO_HPP_
