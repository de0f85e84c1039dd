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

// Shared domain types. Every constructor validates its invariants and throws
// tretr::Error on violation; instances are immutable afterwards.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tretr/error.hpp"

namespace tretr {

namespace detail {
void validate_identifier(std::string_view value, const char* kind);
}

/// Opaque identifier token: non-empty, no whitespace, compared bytewise.
template <class Tag>
class Identifier {
 public:
  explicit Identifier(std::string value) : value_(std::move(value)) {
    detail::validate_identifier(value_, Tag::kind);
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Identifier&, const Identifier&) = default;
  friend std::strong_ordering operator<=>(const Identifier& a,
                                          const Identifier& b) {
    // std::string compares chars as unsigned, which is byte order.
    const int c = a.value_.compare(b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  std::string value_;
};

struct QueryIdTag {
  static constexpr const char* kind = "query id";
};
struct DocIdTag {
  static constexpr const char* kind = "document id";
};

using QueryId = Identifier<QueryIdTag>;
using DocId = Identifier<DocIdTag>;

struct RankedEntry {
  DocId doc;
  std::uint32_t rank;
  double score;
};

/// One query's ranking: ranks exactly 1..n, unique documents, scores
/// non-increasing with rank.
class RankedList {
 public:
  RankedList(QueryId query, std::vector<RankedEntry> entries);

  const QueryId& query() const noexcept { return query_; }
  std::span<const RankedEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  QueryId query_;
  std::vector<RankedEntry> entries_;
};

inline constexpr std::uint32_t kDefaultDepth = 100;

/// The ranked output of one retrieval system. Lists iterate in ascending
/// QueryId order.
class RunTable {
 public:
  RunTable(std::string tag, std::map<QueryId, RankedList> lists,
           std::uint32_t depth = kDefaultDepth);

  const std::string& tag() const noexcept { return tag_; }
  std::uint32_t depth() const noexcept { return depth_; }
  const std::map<QueryId, RankedList>& lists() const noexcept {
    return lists_;
  }
  const RankedList* find(const QueryId& query) const;

 private:
  std::string tag_;
  std::map<QueryId, RankedList> lists_;
  std::uint32_t depth_;
};

struct Query {
  QueryId id;
  std::string text;
};

/// Ordered query collection; file order is preserved.
class QuerySet {
 public:
  QuerySet() = default;
  explicit QuerySet(std::vector<Query> queries);

  std::span<const Query> queries() const noexcept { return queries_; }
  std::size_t size() const noexcept { return queries_.size(); }
  bool empty() const noexcept { return queries_.empty(); }
  const Query& operator[](std::size_t i) const { return queries_[i]; }
  /// Position of `id` in file order.
  std::optional<std::size_t> index_of(const QueryId& id) const;
  bool contains(const QueryId& id) const { return index_of(id).has_value(); }

 private:
  std::vector<Query> queries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Judgment {
  QueryId query;
  DocId doc;
  int grade;
};

/// Graded relevance judgments, at most one per (query, document) pair.
class Qrels {
 public:
  using DocGrades = std::map<DocId, int>;

  Qrels() = default;
  explicit Qrels(std::vector<Judgment> judgments);

  const std::map<QueryId, DocGrades>& by_query() const noexcept {
    return grades_;
  }
  /// Grade of (query, doc); 0 when unjudged.
  int grade(const QueryId& query, const DocId& doc) const;
  std::size_t size() const noexcept { return count_; }

 private:
  std::map<QueryId, DocGrades> grades_;
  std::size_t count_ = 0;
};

/// Partition of a query set into k groups with dense ids in [0, k).
class ClusterAssignment {
 public:
  ClusterAssignment(std::uint32_t k, std::map<QueryId, std::uint32_t> groups);

  std::uint32_t k() const noexcept { return k_; }
  const std::map<QueryId, std::uint32_t>& groups() const noexcept {
    return groups_;
  }
  std::optional<std::uint32_t> group_of(const QueryId& query) const;
  /// Number of queries per group id, length k.
  std::vector<std::size_t> group_sizes() const;
  bool has_empty_groups() const;
  /// Throws unless every query of `queries` is assigned and nothing else is.
  void check_covers(const QuerySet& queries) const;

 private:
  std::uint32_t k_;
  std::map<QueryId, std::uint32_t> groups_;
};

enum class LogBase { kE, kTwo, kTen };

double log_in_base(double x, LogBase base);
std::string_view to_string(LogBase base);
LogBase parse_log_base(std::string_view text);

/// Document population a retrievability distribution is measured over.
struct PooledRetrieved {
  friend bool operator==(const PooledRetrieved&,
                         const PooledRetrieved&) = default;
};
struct FullCollection {
  std::size_t size;
  friend bool operator==(const FullCollection&,
                         const FullCollection&) = default;
};
using Universe = std::variant<PooledRetrieved, FullCollection>;

std::string to_string(const Universe& universe);
/// Accepts "pooled" or "collection:<N>".
Universe parse_universe(std::string_view text);

struct DocScore {
  DocId doc;
  double score;
};

/// Document -> retrievability score, sorted by DocId. Unlisted documents of a
/// FullCollection universe implicitly score zero.
class RetrievabilityTable {
 public:
  /// `max_score` bounds every entry (1 / log(2) for the reciprocal-log form,
  /// 1 for the indicator form).
  RetrievabilityTable(std::vector<DocScore> scores, std::size_t query_count,
                      Universe universe, double max_score);

  std::span<const DocScore> scores() const noexcept { return scores_; }
  std::size_t size() const noexcept { return scores_.size(); }
  std::size_t query_count() const noexcept { return query_count_; }
  const Universe& universe() const noexcept { return universe_; }
  double max_score() const noexcept { return max_score_; }
  /// Score of `doc`, zero when absent.
  double score(const DocId& doc) const;

 private:
  std::vector<DocScore> scores_;
  std::size_t query_count_;
  Universe universe_;
  double max_score_;
};

struct GroupFairness {
  std::uint32_t group;
  std::size_t query_count;
  std::size_t pooled_doc_count;
  /// Absent when the group is flagged and excluded from aggregation.
  std::optional<double> gini;
  std::string flag;
};

struct Aggregates {
  double min;
  double avg;
  double max;
};

struct ReportConfig {
  LogBase log_base = LogBase::kE;
  std::uint32_t depth = kDefaultDepth;
  Universe universe = PooledRetrieved{};
  std::string clustering;
  std::string mode = "reciprocal-log";
};

/// Per-group Ginis plus their min/avg/max aggregation.
class FairnessReport {
 public:
  FairnessReport(std::uint32_t k, std::vector<GroupFairness> per_group,
                 Aggregates aggregates, ReportConfig config,
                 std::optional<double> global_gini = std::nullopt);

  std::uint32_t k() const noexcept { return k_; }
  std::span<const GroupFairness> per_group() const noexcept {
    return per_group_;
  }
  const Aggregates& aggregates() const noexcept { return aggregates_; }
  const ReportConfig& config() const noexcept { return config_; }
  std::optional<double> global_gini() const noexcept { return global_gini_; }

 private:
  std::uint32_t k_;
  std::vector<GroupFairness> per_group_;
  Aggregates aggregates_;
  ReportConfig config_;
  std::optional<double> global_gini_;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  /// Throws unless k1 >= 0 and b in [0, 1].
  void validate() const;
};

}  // namespace tretr
