/*
 * Copyright 2026 The tretr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Relevance effectiveness of a run against graded judgments.
//
// A query is evaluated iff it has at least one judgment with grade > 0;
// evaluated queries missing from the run score 0.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "tretr/types.hpp"

namespace tretr {

struct MetricScores {
  std::map<QueryId, double> per_query;
  double mean = 0.0;
};

/// DCG@c = sum_{i<=c} (2^grade_i - 1) / log2(1 + i), normalized by the DCG
/// of the query's judged grades sorted descending.
MetricScores ndcg_at(const RunTable& run, const Qrels& qrels,
                     std::uint32_t cutoff);

/// AP@c = (sum of precision@i over relevant ranks i <= c) / R, where R counts
/// every relevant judgment of the query.
MetricScores average_precision_at(const RunTable& run, const Qrels& qrels,
                                  std::uint32_t cutoff);

inline MetricScores ndcg_at_10(const RunTable& run, const Qrels& qrels) {
  return ndcg_at(run, qrels, 10);
}

inline MetricScores map_at_100(const RunTable& run, const Qrels& qrels) {
  return average_precision_at(run, qrels, 100);
}

/// "qid,ndcg@10,map@100" rows in ascending query order plus an "all" row.
void write_eval_csv(const MetricScores& ndcg, const MetricScores& map,
                    std::ostream& out);

}  // namespace tretr
