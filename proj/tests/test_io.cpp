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

#include <cstring>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>

#include "support.hpp"
#include "tretr/io.hpp"

namespace tretr {
namespace {

RunTable run_from(const std::string& text, std::uint32_t depth = 100) {
  std::istringstream in(text);
  return parse_run(in, depth);
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected ParseError";
  return 0;
}

TEST(ParseRun, SingleLine) {
  const auto run = run_from("q1 Q0 dA 1 9.5 bm25\n");
  ASSERT_EQ(run.lists().size(), 1U);
  const auto* list = run.find(QueryId("q1"));
  ASSERT_NE(list, nullptr);
  ASSERT_EQ(list->size(), 1U);
  EXPECT_EQ(list->entries()[0].doc.str(), "dA");
  EXPECT_EQ(list->entries()[0].score, 9.5);
  EXPECT_EQ(run.tag(), "bm25");
}

TEST(ParseRun, ResortsShuffledRanks) {
  const auto run = run_from(
      "q1 Q0 c 3 1.0 t\n"
      "q1 Q0 a 1 3.0 t\n"
      "q1\tQ0  b 2 2.0 t\n");
  const auto e = run.find(QueryId("q1"))->entries();
  ASSERT_EQ(e.size(), 3U);
  EXPECT_EQ(e[0].doc.str(), "a");
  EXPECT_EQ(e[1].doc.str(), "b");
  EXPECT_EQ(e[2].doc.str(), "c");
  EXPECT_EQ(e[2].rank, 3U);
}

TEST(ParseRun, MalformedLinesReportTheirLineNumber) {
  EXPECT_EQ(parse_error_line([] { run_from("q1 Q0 dA one 9.5 bm25\n"); }), 1U);
  EXPECT_EQ(parse_error_line([] {
              run_from("q1 Q0 a 1 2 t\nq1 Q0 b 2 x t\n");
            }),
            2U);
  EXPECT_EQ(parse_error_line([] { run_from("q1 Q0 a 1 2\n"); }), 1U);
  EXPECT_EQ(parse_error_line([] { run_from("q1 Q0 a 0 2 t\n"); }), 1U);
  EXPECT_EQ(parse_error_line([] { run_from("q1 Q0 a 1 nan t\n"); }), 1U);
}

TEST(ParseRun, RejectsDuplicatesAndGaps) {
  EXPECT_THROW(run_from("q1 Q0 a 1 2 t\nq1 Q0 a 2 1 t\n"), ParseError);
  EXPECT_THROW(run_from("q1 Q0 a 1 2 t\nq1 Q0 b 3 1 t\n"), ParseError);
  EXPECT_THROW(run_from("q1 Q0 a 1 2 t\nq1 Q0 b 1 1 t\n"), ParseError);
}

TEST(ParseRun, TruncatesAtDepth) {
  const auto run = run_from("q1 Q0 a 1 3 t\nq1 Q0 b 2 2 t\nq1 Q0 c 3 1 t\n", 2);
  EXPECT_EQ(run.find(QueryId("q1"))->size(), 2U);
  EXPECT_EQ(run.depth(), 2U);
}

TEST(WriteRun, RoundTripIsByteStable) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> score(-50.0, 50.0);
  std::ostringstream text;
  for (int q = 0; q < 20; ++q) {
    std::vector<double> s(1 + rng() % 30);
    for (auto& v : s) v = score(rng);
    std::sort(s.rbegin(), s.rend());
    for (std::size_t i = 0; i < s.size(); ++i) {
      text << "q" << q << " Q0 d" << rng() % 100000 << "x" << i << ' ' << i + 1
           << ' ' << s[i] << " sys\n";
    }
  }
  const auto first = run_from(text.str());
  const auto once = testing::run_text(first);
  const auto twice = testing::run_text(run_from(once));
  EXPECT_EQ(once, twice);
}

TEST(FormatExact, RoundTripsDoubles) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::stod(format_exact(v)), v);
  }
  EXPECT_EQ(format_fixed6(0.25), "0.250000");
}

TEST(ParseQrels, Examples) {
  std::istringstream ok("q1 0 dA 1\n");
  const auto q = parse_qrels(ok);
  EXPECT_EQ(q.size(), 1U);
  EXPECT_EQ(q.grade(QueryId("q1"), DocId("dA")), 1);

  std::istringstream dup("q1 0 dA 1\nq1 0 dA 2\n");
  EXPECT_THROW(parse_qrels(dup), ParseError);
  std::istringstream neg("q1 0 dA -1\n");
  EXPECT_THROW(parse_qrels(neg), ParseError);
  std::istringstream cols("q1 0 dA\n");
  EXPECT_THROW(parse_qrels(cols), ParseError);
}

TEST(ParseQueries, Examples) {
  std::istringstream ok("q1\twhat is bm25\nq2\t\n");
  const auto qs = parse_queries(ok);
  ASSERT_EQ(qs.size(), 2U);
  EXPECT_EQ(qs[0].text, "what is bm25");
  EXPECT_EQ(qs[1].text, "");

  std::istringstream dup("q1\ta\nq1\tb\n");
  EXPECT_THROW(parse_queries(dup), ParseError);
  std::istringstream notab("q1 a\n");
  EXPECT_THROW(parse_queries(notab), ParseError);
}

TEST(ParseQueries, SplitsOnFirstTabOnly) {
  std::istringstream in("q1\ta\tb\r\n");
  const auto qs = parse_queries(in);
  EXPECT_EQ(qs[0].text, "a\tb");
  std::ostringstream out;
  write_queries(qs, out);
  EXPECT_EQ(out.str(), "q1\ta\tb\n");
}

// ---- embeddings ------------------------------------------------------------

std::string embed_bytes(const EmbeddingMatrix& m) {
  std::ostringstream out(std::ios::binary);
  write_embeddings(m, out);
  return out.str();
}

EmbeddingMatrix embed_from(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_embeddings(in);
}

TEST(Embeddings, OneByTwo) {
  const auto m = embed_from(std::string("TRETR-EMB 1 1 2\nq1\n") +
                            std::string("\0\0\0\0\0\0\x80\x3f", 8));
  EXPECT_EQ(m.rows(), 1U);
  EXPECT_EQ(m.dim(), 2U);
  EXPECT_EQ(m.row(0)[0], 0.0F);
  EXPECT_EQ(m.row(0)[1], 1.0F);
}

TEST(Embeddings, RandomMatrixRoundTripsBytes) {
  std::mt19937 rng(5);
  std::normal_distribution<float> g;
  std::vector<float> data(12);
  for (auto& v : data) v = g(rng);
  const EmbeddingMatrix m({QueryId("a"), QueryId("b"), QueryId("c")}, 4, data,
                          "pooling=mean");
  const auto once = embed_bytes(m);
  EXPECT_EQ(once.substr(0, once.find('\n')), "TRETR-EMB 1 3 4 # pooling=mean");
  const auto back = embed_from(once);
  EXPECT_EQ(back, m);
  EXPECT_EQ(embed_bytes(back), once);
}

TEST(Embeddings, RejectsBadPayloads) {
  const EmbeddingMatrix m({QueryId("a")}, 2, {1.0F, 2.0F});
  const auto bytes = embed_bytes(m);
  EXPECT_THROW(embed_from(bytes.substr(0, bytes.size() - 1)), ParseError);
  EXPECT_THROW(embed_from(bytes + "x"), ParseError);
  EXPECT_THROW(embed_from("TRETR-EMB 2 1 2\na\n"), ParseError);
  EXPECT_THROW(embed_from("NOPE 1 1 2\na\n"), ParseError);
  EXPECT_THROW(embed_from("TRETR-EMB 1 1 0\na\n"), ParseError);
  EXPECT_THROW(EmbeddingMatrix({QueryId("a"), QueryId("a")}, 1, {1.0F, 2.0F}),
               Error);
  EXPECT_THROW(EmbeddingMatrix({QueryId("a")}, 1, {NAN}), Error);
}

// ---- clusters --------------------------------------------------------------

TEST(Clusters, TwoRowsAndRoundTrip) {
  const ClusterAssignment c(2, {{QueryId("q2"), 1}, {QueryId("q1"), 0}});
  std::ostringstream out;
  write_clusters(c, out);
  EXPECT_EQ(out.str(), "qid,cluster\nq1,0\nq2,1\n");
  std::istringstream in(out.str());
  const auto back = parse_clusters(in, 2);
  std::ostringstream again;
  write_clusters(back, again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Clusters, RejectsOutOfRangeIds) {
  std::istringstream big("qid,cluster\nq1,5\n");
  EXPECT_THROW(parse_clusters(big, 2), ParseError);
  std::istringstream neg("qid,cluster\nq1,-1\n");
  EXPECT_THROW(parse_clusters(neg), ParseError);
  std::istringstream header("query,cluster\nq1,0\n");
  EXPECT_THROW(parse_clusters(header), ParseError);
  std::istringstream inferred("qid,cluster\nq1,0\nq2,3\n");
  EXPECT_EQ(parse_clusters(inferred).k(), 4U);
}

// ---- tables and reports ------------------------------------------------------

TEST(Table, RoundTrips) {
  const RetrievabilityTable t({{DocId("a"), 0.1}, {DocId("b"), 1.0 / 3.0}}, 3,
                              PooledRetrieved{}, 1.0);
  std::ostringstream out;
  write_table(t, out);
  std::istringstream in(out.str());
  const auto rows = parse_table(in);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[1].first, "b");
  EXPECT_EQ(rows[1].second, 1.0 / 3.0);
}

TEST(Report, JsonShape) {
  ReportConfig cfg;
  cfg.clustering = "tfidf kmeans k=2 seed=1";
  const FairnessReport r(
      2, {{0, 3, 10, 0.25, ""}, {1, 0, 0, std::nullopt, "empty"}},
      {0.25, 0.25, 0.25}, cfg, 0.5);
  std::ostringstream out;
  write_report(r, out);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["k"], 2);
  ASSERT_EQ(j["per_group"].size(), 2U);
  EXPECT_EQ(j["per_group"][0]["group"], 0);
  EXPECT_EQ(j["per_group"][1]["group"], 1);
  EXPECT_TRUE(j["per_group"][1]["gini"].is_null());
  EXPECT_EQ(j["per_group"][1]["flag"], "empty");
  EXPECT_DOUBLE_EQ(j["aggregates"]["global"].get<double>(), 0.5);
  EXPECT_EQ(j["config"]["log_base"], "e");
  EXPECT_EQ(j["config"]["universe"], "pooled");
  EXPECT_EQ(j["config"]["depth"], 100);
}

TEST(Files, OpenErrorsNameThePath) {
  try {
    open_input("/nonexistent/dir/x.trec");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.trec"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace tretr
