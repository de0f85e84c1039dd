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

#include "tretr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "tretr/io.hpp"

namespace tretr {

namespace {

std::size_t relevant_count(const Qrels::DocGrades& grades) {
  return static_cast<std::size_t>(
      std::count_if(grades.begin(), grades.end(),
                    [](const auto& g) { return g.second > 0; }));
}

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

double discount(std::size_t rank) {
  return 1.0 / std::log2(1.0 + static_cast<double>(rank));
}

template <class PerQuery>
MetricScores evaluate(const RunTable& run, const Qrels& qrels,
                      PerQuery&& per_query) {
  MetricScores out;
  double total = 0.0;
  for (const auto& [qid, grades] : qrels.by_query()) {
    if (relevant_count(grades) == 0) continue;
    const RankedList* list = run.find(qid);
    const double v = list ? per_query(*list, grades) : 0.0;
    out.per_query.emplace(qid, v);
    total += v;
  }
  if (out.per_query.empty()) {
    throw Error("no evaluable queries: no query has a relevant judgment");
  }
  out.mean = total / static_cast<double>(out.per_query.size());
  return out;
}

int grade_in(const Qrels::DocGrades& grades, const DocId& doc) {
  auto it = grades.find(doc);
  return it == grades.end() ? 0 : it->second;
}

}  // namespace

MetricScores ndcg_at(const RunTable& run, const Qrels& qrels,
                     std::uint32_t cutoff) {
  if (cutoff < 1) throw Error("nDCG cutoff must be positive");
  return evaluate(run, qrels, [cutoff](const RankedList& list,
                                       const Qrels::DocGrades& grades) {
    const auto entries = list.entries();
    const std::size_t n = std::min<std::size_t>(cutoff, entries.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dcg += gain(grade_in(grades, entries[i].doc)) * discount(i + 1);
    }
    std::vector<int> ideal;
    ideal.reserve(grades.size());
    for (const auto& [doc, g] : grades) ideal.push_back(g);
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    const std::size_t m = std::min<std::size_t>(cutoff, ideal.size());
    for (std::size_t i = 0; i < m; ++i) idcg += gain(ideal[i]) * discount(i + 1);
    return dcg / idcg;
  });
}

MetricScores average_precision_at(const RunTable& run, const Qrels& qrels,
                                  std::uint32_t cutoff) {
  if (cutoff < 1) throw Error("AP cutoff must be positive");
  return evaluate(run, qrels, [cutoff](const RankedList& list,
                                       const Qrels::DocGrades& grades) {
    const auto entries = list.entries();
    const std::size_t n = std::min<std::size_t>(cutoff, entries.size());
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (grade_in(grades, entries[i].doc) > 0) {
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
      }
    }
    return sum / static_cast<double>(relevant_count(grades));
  });
}

void write_eval_csv(const MetricScores& ndcg, const MetricScores& map,
                    std::ostream& out) {
  out << "qid,ndcg@10,map@100\n";
  for (const auto& [qid, v] : ndcg.per_query) {
    auto it = map.per_query.find(qid);
    out << qid.str() << ',' << format_fixed6(v) << ','
        << (it == map.per_query.end() ? std::string("") : format_fixed6(it->second))
        << '\n';
  }
  out << "all," << format_fixed6(ndcg.mean) << ',' << format_fixed6(map.mean)
      << '\n';
}

}  // namespace tretr
