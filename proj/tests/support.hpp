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

// Test-only helpers. The oracles here deliberately share no code with the
// library: they re-derive each quantity from its textbook definition.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tretr/engine.hpp"
#include "tretr/io.hpp"
#include "tretr/types.hpp"

namespace tretr::testing {

inline std::filesystem::path data_dir() { return TRETR_TEST_DATA_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tretr-" + name + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const {
    return path_ / leaf;
  }

 private:
  std::filesystem::path path_;
};

struct ToyCollection {
  std::vector<CorpusDoc> corpus;
  QuerySet queries;
  Qrels qrels;
};

inline const ToyCollection& toy() {
  static const ToyCollection c = [] {
    std::ifstream corpus(data_dir() / "corpus.tsv");
    std::ifstream queries(data_dir() / "queries.tsv");
    std::ifstream qrels(data_dir() / "qrels.txt");
    return ToyCollection{parse_corpus(corpus), parse_queries(queries),
                         parse_qrels(qrels)};
  }();
  return c;
}

inline RunTable toy_bm25_run(std::uint32_t depth = 100) {
  const auto index = InvertedIndex::build(toy().corpus);
  return bm25_run(index, toy().queries, Bm25Params{}, depth, "bm25");
}

inline std::string run_text(const RunTable& run) {
  std::ostringstream s;
  write_run(run, s);
  return s.str();
}

// ---- oracles --------------------------------------------------------------

/// Gini as mean absolute difference: sum_ij |x_i - x_j| / (2 n^2 mu).
inline double gini_mad(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (double v : x) total += v;
  const double mu = total / n;
  double acc = 0.0;
  for (double a : x) {
    for (double b : x) acc += std::fabs(a - b);
  }
  return acc / (2.0 * n * n * mu);
}

/// Reciprocal-log retrievability straight from TREC run text: every line
/// with rank <= depth adds 1/ln(1+rank) to its document, and the sums are
/// divided by `query_count`.
inline std::map<std::string, double> retrievability_from_run_text(
    const std::string& text, std::size_t query_count, unsigned depth) {
  std::map<std::string, double> sums;
  std::istringstream in(text);
  std::string qid, q0, doc, tag;
  unsigned rank = 0;
  double score = 0.0;
  while (in >> qid >> q0 >> doc >> rank >> score >> tag) {
    if (rank <= depth) sums[doc] += 1.0 / std::log(1.0 + rank);
  }
  for (auto& [d, v] : sums) v /= static_cast<double>(query_count);
  return sums;
}

/// Lowest within-cluster SSE over every labelling of `points` into 2
/// non-empty groups; returns the labels with point 0 in group 0.
inline std::vector<int> best_two_partition(
    const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  double best = INFINITY;
  std::vector<int> best_labels;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (mask & 1U) continue;  // fix point 0 in group 0
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (mask >> i) & 1U;
    double sse = 0.0;
    bool both = false;
    for (int g = 0; g < 2; ++g) {
      std::vector<double> mean(points[0].size(), 0.0);
      double count = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != g) continue;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += points[i][j];
        count += 1.0;
      }
      if (count == 0.0) break;
      if (g == 1) both = true;
      for (auto& m : mean) m /= count;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != g) continue;
        for (std::size_t j = 0; j < mean.size(); ++j) {
          sse += (points[i][j] - mean[j]) * (points[i][j] - mean[j]);
        }
      }
    }
    if (both && sse < best) {
      best = sse;
      best_labels = labels;
    }
  }
  return best_labels;
}

/// Canonical form of a labelling: groups renumbered by first appearance.
inline std::vector<int> canonical(const std::vector<std::uint32_t>& labels) {
  std::map<std::uint32_t, int> seen;
  std::vector<int> out;
  for (auto l : labels) {
    auto [it, _] = seen.emplace(l, static_cast<int>(seen.size()));
    out.push_back(it->second);
  }
  return out;
}

/// Builds a RunTable from (qid, [doc...]) with descending integer scores.
inline RunTable make_run(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& ranked,
    std::uint32_t depth = 100) {
  std::map<QueryId, RankedList> lists;
  for (const auto& [q, docs] : ranked) {
    std::vector<RankedEntry> entries;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      entries.push_back({DocId(docs[i]), static_cast<std::uint32_t>(i + 1),
                         static_cast<double>(docs.size() - i)});
    }
    lists.emplace(QueryId(q), RankedList(QueryId(q), std::move(entries)));
  }
  return RunTable("t", std::move(lists), depth);
}

inline QuerySet make_queries(const std::vector<std::string>& ids) {
  std::vector<Query> qs;
  for (const auto& id : ids) qs.push_back({QueryId(id), "x"});
  return QuerySet(std::move(qs));
}

}  // namespace tretr::testing
