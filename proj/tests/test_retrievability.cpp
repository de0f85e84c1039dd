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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "tretr/retrievability.hpp"

namespace tretr {
namespace {

using testing::make_queries;
using testing::make_run;

TEST(Retrievability, SingleQueryTopDocument) {
  const auto r = retrievability_global(make_run({{"q1", {"A"}}}),
                                       make_queries({"q1"}));
  EXPECT_NEAR(r.score(DocId("A")), 1.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(r.score(DocId("A")), 1.442695, 1e-6);
}

TEST(Retrievability, TwoQueryHandExample) {
  const auto r = retrievability_global(
      make_run({{"q1", {"A", "B"}}, {"q2", {"B"}}}), make_queries({"q1", "q2"}));
  EXPECT_NEAR(r.score(DocId("A")), 0.721348, 1e-6);
  EXPECT_NEAR(r.score(DocId("B")),
              (1.0 / std::log(3.0) + 1.0 / std::log(2.0)) / 2.0, 1e-15);
  EXPECT_NEAR(r.score(DocId("B")), 1.176467, 1e-6);
  EXPECT_LE(r.score(DocId("B")), 1.0 / std::log(2.0));
}

TEST(Retrievability, QueriesWithoutRunsStillCount) {
  const auto r = retrievability_global(make_run({{"q1", {"A"}}}),
                                       make_queries({"q1", "q2", "q3", "q4"}));
  EXPECT_NEAR(r.score(DocId("A")), 1.0 / std::log(2.0) / 4.0, 1e-15);
  EXPECT_EQ(r.query_count(), 4U);
}

TEST(Retrievability, UnretrievedDocumentIsZero) {
  RetrievabilityOptions opt;
  opt.universe = FullCollection{10};
  const auto r =
      retrievability_global(make_run({{"q1", {"A"}}}), make_queries({"q1"}), opt);
  EXPECT_EQ(r.score(DocId("Z")), 0.0);
  EXPECT_EQ(r.size(), 1U);
}

TEST(Retrievability, Errors) {
  EXPECT_THROW(retrievability_global(make_run({{"q9", {"A"}}}),
                                     make_queries({"q1"})),
               Error);
  RetrievabilityOptions opt;
  opt.depth = 0;
  EXPECT_THROW(retrievability_global(make_run({{"q1", {"A"}}}),
                                     make_queries({"q1"}), opt),
               Error);
}

TEST(Retrievability, LogBaseScalesUniformly) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  RetrievabilityOptions two;
  two.log_base = LogBase::kTwo;
  const auto e = retrievability_global(run, qs);
  const auto b2 = retrievability_global(run, qs, two);
  ASSERT_EQ(e.size(), b2.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_NEAR(b2.scores()[i].score, e.scores()[i].score * std::log(2.0),
                1e-12);
  }
}

TEST(Retrievability, MatchesBruteForceFromRunFile) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  const auto oracle =
      testing::retrievability_from_run_text(testing::run_text(run), qs.size(), 100);
  const auto r = retrievability_global(run, qs);
  ASSERT_EQ(r.size(), oracle.size());
  for (const auto& e : r.scores()) {
    EXPECT_NEAR(e.score, oracle.at(e.doc.str()), 1e-12) << e.doc.str();
  }
}

TEST(Retrievability, ConservationIdentity) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  const auto r = retrievability_global(run, qs);
  double lhs = 0.0;
  for (const auto& e : r.scores()) lhs += e.score * static_cast<double>(qs.size());
  double rhs = 0.0;
  for (const auto& [qid, list] : run.lists()) {
    for (std::size_t i = 1; i <= list.size(); ++i) rhs += 1.0 / std::log(1.0 + i);
  }
  EXPECT_NEAR(lhs, rhs, 1e-9);
}

TEST(Retrievability, ThreadCountDoesNotChangeBits) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  RetrievabilityOptions opt;
  const auto a = retrievability_global(run, qs, opt);
  opt.threads = 5;
  const auto b = retrievability_global(run, qs, opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.scores()[i].score, b.scores()[i].score);
  }
}

TEST(Retrievability, QueryOrderDoesNotMatter) {
  const auto run = testing::toy_bm25_run();
  auto shuffled = std::vector<Query>(testing::toy().queries.queries().begin(),
                                     testing::toy().queries.queries().end());
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto a = retrievability_global(run, testing::toy().queries);
  const auto b = retrievability_global(run, QuerySet(shuffled));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.scores()[i].score, b.scores()[i].score);
  }
}

TEST(Retrievability, AddingAQueryNeverLowersSummedMass) {
  // |Q| * r(D) is a plain sum over queries, so it can only grow.
  const auto full = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  std::map<QueryId, RankedList> fewer(full.lists().begin(), full.lists().end());
  fewer.erase(fewer.begin());
  const RunTable part("bm25", fewer);
  const auto a = retrievability_global(part, qs);
  const auto b = retrievability_global(full, qs);
  for (const auto& e : a.scores()) EXPECT_LE(e.score, b.score(e.doc));
}

// ---- localized -------------------------------------------------------------

TEST(Localized, OneGroupEqualsGlobal) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  std::map<QueryId, std::uint32_t> all;
  for (const auto& q : qs.queries()) all.emplace(q.id, 0);
  const auto local = retrievability_local(run, qs, ClusterAssignment(1, all));
  const auto global = retrievability_global(run, qs);
  ASSERT_TRUE(local[0].has_value());
  ASSERT_EQ(local[0]->size(), global.size());
  for (std::size_t i = 0; i < global.size(); ++i) {
    EXPECT_EQ(local[0]->scores()[i].doc, global.scores()[i].doc);
    EXPECT_EQ(local[0]->scores()[i].score, global.scores()[i].score);
  }
}

TEST(Localized, DisjointSingletonGroups) {
  const auto run = make_run({{"q1", {"A", "B"}}, {"q2", {"C"}}});
  const auto qs = make_queries({"q1", "q2"});
  const ClusterAssignment c(2, {{QueryId("q1"), 0}, {QueryId("q2"), 1}});
  const auto t = retrievability_local(run, qs, c);
  EXPECT_NEAR(t[0]->score(DocId("A")), 1.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(t[0]->score(DocId("B")), 1.0 / std::log(3.0), 1e-15);
  EXPECT_EQ(t[0]->score(DocId("C")), 0.0);
  EXPECT_NEAR(t[1]->score(DocId("C")), 1.0 / std::log(2.0), 1e-15);
  EXPECT_EQ(t[1]->size(), 1U);
}

TEST(Localized, EmptyGroupAndEmptyPool) {
  const auto run = make_run({{"q1", {"A"}}});
  const auto qs = make_queries({"q1", "q2"});
  const ClusterAssignment c(3, {{QueryId("q1"), 0}, {QueryId("q2"), 2}});
  const auto t = retrievability_local(run, qs, c);
  EXPECT_TRUE(t[0].has_value());
  EXPECT_FALSE(t[1].has_value());
  ASSERT_TRUE(t[2].has_value());
  EXPECT_EQ(t[2]->size(), 0U);
}

TEST(Localized, PartitionConsistency) {
  const auto run = testing::toy_bm25_run();
  const auto& qs = testing::toy().queries;
  const auto global = retrievability_global(run, qs);
  std::mt19937_64 rng(31);
  for (const std::uint32_t k : {1U, 2U, 7U, static_cast<std::uint32_t>(qs.size())}) {
    std::map<QueryId, std::uint32_t> groups;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto g = k == qs.size() ? static_cast<std::uint32_t>(i)
                                    : static_cast<std::uint32_t>(rng() % k);
      groups.emplace(qs[i].id, g);
    }
    const ClusterAssignment c(k, groups);
    const auto local = retrievability_local(run, qs, c);
    const auto sizes = c.group_sizes();
    for (const auto& e : global.scores()) {
      double sum = 0.0;
      for (std::uint32_t g = 0; g < k; ++g) {
        if (local[g]) sum += static_cast<double>(sizes[g]) * local[g]->score(e.doc);
      }
      EXPECT_NEAR(sum, static_cast<double>(qs.size()) * e.score, 1e-12)
          << "k=" << k << " doc=" << e.doc.str();
    }
  }
}

TEST(Localized, UncoveredQueryIsAnError) {
  const auto run = make_run({{"q1", {"A"}}});
  const ClusterAssignment c(1, {{QueryId("q1"), 0}});
  EXPECT_THROW(retrievability_local(run, make_queries({"q1", "q2"}), c), Error);
}

// ---- indicator -------------------------------------------------------------

TEST(Indicator, TopOneOfTwoQueries) {
  const auto r = retrievability_indicator(
      make_run({{"q1", {"A", "B"}}, {"q2", {"B", "C"}}}),
      make_queries({"q1", "q2"}), 1);
  EXPECT_EQ(r.score(DocId("A")), 0.5);
  EXPECT_EQ(r.score(DocId("B")), 0.5);
  EXPECT_EQ(r.score(DocId("C")), 0.0);
}

TEST(Indicator, EveryDocumentOnceGivesOneOverN) {
  const auto r = retrievability_indicator(
      make_run({{"q1", {"A", "B"}}, {"q2", {"C", "D"}}, {"q3", {"E"}}}),
      make_queries({"q1", "q2", "q3"}), 100);
  for (const auto& e : r.scores()) EXPECT_EQ(e.score, 1.0 / 3.0);
}

TEST(Indicator, ZeroCutoffIsAnError) {
  EXPECT_THROW(retrievability_indicator(make_run({{"q1", {"A"}}}),
                                        make_queries({"q1"}), 0),
               Error);
  EXPECT_THROW(parse_mode("indicator:0"), Error);
  EXPECT_EQ(to_string(parse_mode("indicator:10")), "indicator:10");
}

}  // namespace
}  // namespace tretr
