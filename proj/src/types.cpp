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

#include "tretr/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace tretr {

namespace detail {

void validate_identifier(std::string_view value, const char* kind) {
  if (value.empty()) {
    throw Error(std::string("empty ") + kind);
  }
  for (const char c : value) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f') {
      throw Error(std::string(kind) + " '" + std::string(value) +
                  "' contains whitespace");
    }
  }
}

}  // namespace detail

RankedList::RankedList(QueryId query, std::vector<RankedEntry> entries)
    : query_(std::move(query)), entries_(std::move(entries)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.rank != i + 1) {
      throw Error("query " + query_.str() + ": expected rank " +
                  std::to_string(i + 1) + ", found " +
                  std::to_string(e.rank));
    }
    if (!seen.insert(e.doc.str()).second) {
      throw Error("query " + query_.str() + ": document " + e.doc.str() +
                  " ranked twice");
    }
    if (i > 0 && e.score > entries_[i - 1].score) {
      throw Error("query " + query_.str() + ": score increases at rank " +
                  std::to_string(e.rank));
    }
  }
}

RunTable::RunTable(std::string tag, std::map<QueryId, RankedList> lists,
                   std::uint32_t depth)
    : tag_(std::move(tag)), lists_(std::move(lists)), depth_(depth) {
  if (depth_ < 1) {
    throw Error("run depth must be positive");
  }
  for (const auto& [qid, list] : lists_) {
    if (!(list.query() == qid)) {
      throw Error("run list keyed by " + qid.str() + " belongs to " +
                  list.query().str());
    }
    if (list.size() > depth_) {
      throw Error("query " + qid.str() + " has " +
                  std::to_string(list.size()) + " entries, depth is " +
                  std::to_string(depth_));
    }
  }
}

const RankedList* RunTable::find(const QueryId& query) const {
  auto it = lists_.find(query);
  return it == lists_.end() ? nullptr : &it->second;
}

QuerySet::QuerySet(std::vector<Query> queries) : queries_(std::move(queries)) {
  index_.reserve(queries_.size());
  for (std::size_t i = 0; i < queries_.size(); ++i) {
    if (!index_.emplace(queries_[i].id.str(), i).second) {
      throw Error("duplicate query id " + queries_[i].id.str());
    }
  }
}

std::optional<std::size_t> QuerySet::index_of(const QueryId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Qrels::Qrels(std::vector<Judgment> judgments) {
  for (auto& j : judgments) {
    if (j.grade < 0) {
      throw Error("negative grade for (" + j.query.str() + ", " +
                  j.doc.str() + ")");
    }
    auto& docs = grades_[j.query];
    if (!docs.emplace(j.doc, j.grade).second) {
      throw Error("duplicate judgment for (" + j.query.str() + ", " +
                  j.doc.str() + ")");
    }
    ++count_;
  }
}

int Qrels::grade(const QueryId& query, const DocId& doc) const {
  auto q = grades_.find(query);
  if (q == grades_.end()) return 0;
  auto d = q->second.find(doc);
  return d == q->second.end() ? 0 : d->second;
}

ClusterAssignment::ClusterAssignment(std::uint32_t k,
                                     std::map<QueryId, std::uint32_t> groups)
    : k_(k), groups_(std::move(groups)) {
  if (k_ == 0) {
    throw Error("cluster count k must be positive");
  }
  for (const auto& [qid, g] : groups_) {
    if (g >= k_) {
      throw Error("query " + qid.str() + " assigned to group " +
                  std::to_string(g) + " but k = " + std::to_string(k_));
    }
  }
}

std::optional<std::uint32_t> ClusterAssignment::group_of(
    const QueryId& query) const {
  auto it = groups_.find(query);
  if (it == groups_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> ClusterAssignment::group_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (const auto& [qid, g] : groups_) ++sizes[g];
  return sizes;
}

bool ClusterAssignment::has_empty_groups() const {
  const auto sizes = group_sizes();
  return std::any_of(sizes.begin(), sizes.end(),
                     [](std::size_t s) { return s == 0; });
}

void ClusterAssignment::check_covers(const QuerySet& queries) const {
  for (const auto& q : queries.queries()) {
    if (!groups_.contains(q.id)) {
      throw Error("query " + q.id.str() + " has no cluster assignment");
    }
  }
  if (groups_.size() != queries.size()) {
    for (const auto& [qid, g] : groups_) {
      if (!queries.contains(qid)) {
        throw Error("cluster assignment names unknown query " + qid.str());
      }
    }
  }
}

double log_in_base(double x, LogBase base) {
  switch (base) {
    case LogBase::kE:
      return std::log(x);
    case LogBase::kTwo:
      return std::log2(x);
    case LogBase::kTen:
      return std::log10(x);
  }
  return std::log(x);
}

std::string_view to_string(LogBase base) {
  switch (base) {
    case LogBase::kE:
      return "e";
    case LogBase::kTwo:
      return "2";
    case LogBase::kTen:
      return "10";
  }
  return "e";
}

LogBase parse_log_base(std::string_view text) {
  if (text == "e") return LogBase::kE;
  if (text == "2") return LogBase::kTwo;
  if (text == "10") return LogBase::kTen;
  throw Error("unknown log base '" + std::string(text) +
              "' (expected e, 2 or 10)");
}

std::string to_string(const Universe& universe) {
  if (const auto* full = std::get_if<FullCollection>(&universe)) {
    return "collection:" + std::to_string(full->size);
  }
  return "pooled";
}

Universe parse_universe(std::string_view text) {
  if (text == "pooled") return PooledRetrieved{};
  constexpr std::string_view prefix = "collection:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::size_t n = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n > 0) {
      return FullCollection{n};
    }
  }
  throw Error("unknown universe '" + std::string(text) +
              "' (expected pooled or collection:<N>)");
}

RetrievabilityTable::RetrievabilityTable(std::vector<DocScore> scores,
                                         std::size_t query_count,
                                         Universe universe, double max_score)
    : scores_(std::move(scores)),
      query_count_(query_count),
      universe_(universe),
      max_score_(max_score) {
  if (query_count_ == 0) {
    throw Error("retrievability table needs a positive query count");
  }
  // Summation of per-query terms may overshoot the exact bound by rounding.
  const double limit = max_score_ * (1.0 + 1e-12);
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    const double s = scores_[i].score;
    if (!(s >= 0.0) || s > limit) {
      throw Error("retrievability score " + std::to_string(s) + " for " +
                  scores_[i].doc.str() + " outside [0, " +
                  std::to_string(max_score_) + "]");
    }
    if (i > 0 && !(scores_[i - 1].doc < scores_[i].doc)) {
      throw Error("retrievability entries must be sorted and unique");
    }
  }
  if (const auto* full = std::get_if<FullCollection>(&universe_)) {
    if (full->size < scores_.size()) {
      throw Error("collection size " + std::to_string(full->size) +
                  " is smaller than the " + std::to_string(scores_.size()) +
                  " scored documents");
    }
  }
}

double RetrievabilityTable::score(const DocId& doc) const {
  auto it = std::lower_bound(
      scores_.begin(), scores_.end(), doc,
      [](const DocScore& e, const DocId& d) { return e.doc < d; });
  return (it != scores_.end() && it->doc == doc) ? it->score : 0.0;
}

FairnessReport::FairnessReport(std::uint32_t k,
                               std::vector<GroupFairness> per_group,
                               Aggregates aggregates, ReportConfig config,
                               std::optional<double> global_gini)
    : k_(k),
      per_group_(std::move(per_group)),
      aggregates_(aggregates),
      config_(std::move(config)),
      global_gini_(global_gini) {
  if (k_ == 0) throw Error("report k must be positive");
  if (!(aggregates_.min <= aggregates_.avg &&
        aggregates_.avg <= aggregates_.max)) {
    throw Error("report aggregates violate min <= avg <= max");
  }
  for (std::size_t i = 0; i < per_group_.size(); ++i) {
    const auto& g = per_group_[i];
    if (i > 0 && per_group_[i - 1].group >= g.group) {
      throw Error("report groups must be strictly ascending");
    }
    if (g.group >= k_) throw Error("report group id out of range");
    if (g.gini && !(*g.gini >= 0.0 && *g.gini < 1.0)) {
      throw Error("group gini outside [0, 1)");
    }
  }
}

void Bm25Params::validate() const {
  if (!(k1 >= 0.0)) throw Error("BM25 k1 must be non-negative");
  if (!(b >= 0.0 && b <= 1.0)) throw Error("BM25 b must lie in [0, 1]");
}

}  // namespace tretr
