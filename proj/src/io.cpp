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

#include "tretr/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace tretr {

namespace {

constexpr std::string_view kEmbeddingMagic = "TRETR-EMB";
constexpr std::string_view kEmbeddingVersion = "1";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

// Run line held until its query's ranks are sorted.
struct PendingEntry {
  std::string doc;
  std::uint32_t rank;
  double score;
};

// Reads "id<TAB>text" lines. Blank lines are skipped; any other line without
// a tab is malformed.
template <class Id>
std::vector<std::pair<Id, std::string>> parse_tsv(std::istream& in,
                                                  const char* what) {
  std::vector<std::pair<Id, std::string>> rows;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(std::string("missing tab in ") + what + " line",
                       lineno);
    }
    std::string id = line.substr(0, tab);
    if (!seen.insert(id).second) {
      throw ParseError(std::string("duplicate ") + what + " id " + id,
                       lineno);
    }
    try {
      rows.emplace_back(Id(std::move(id)), line.substr(tab + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return rows;
}

}  // namespace

std::string format_exact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

std::string format_fixed6(double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.6f", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary
                                : std::ios::in);
  if (!in) {
    throw Error("cannot open input file " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::out | std::ios::binary |
                                       std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) {
    throw Error("cannot open output file " + path.string());
  }
  return out;
}

RunTable parse_run(std::istream& in, std::uint32_t depth) {
  if (depth < 1) throw Error("depth must be positive");
  std::unordered_map<std::string, std::vector<PendingEntry>> pending;
  std::unordered_map<std::string, std::unordered_set<std::string>> docs_seen;
  std::string tag;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != 6) {
      throw ParseError("expected 6 columns, found " +
                           std::to_string(cols.size()),
                       lineno);
    }
    const auto rank = parse_number<std::uint32_t>(cols[3]);
    if (!rank || *rank == 0) {
      throw ParseError("rank '" + std::string(cols[3]) +
                           "' is not a positive integer",
                       lineno);
    }
    const auto score = parse_number<double>(cols[4]);
    if (!score || std::isnan(*score)) {
      throw ParseError("score '" + std::string(cols[4]) + "' is not numeric",
                       lineno);
    }
    if (tag.empty()) tag = std::string(cols[5]);
    std::string qid(cols[0]);
    std::string doc(cols[2]);
    if (!docs_seen[qid].insert(doc).second) {
      throw ParseError("duplicate document " + doc + " for query " + qid,
                       lineno);
    }
    // Published runs often go deeper than the evaluation cutoff.
    if (*rank > depth) continue;
    pending[std::move(qid)].push_back({std::move(doc), *rank, *score});
  }

  std::map<QueryId, RankedList> lists;
  for (auto& [qid, entries] : pending) {
    std::sort(entries.begin(), entries.end(),
              [](const PendingEntry& a, const PendingEntry& b) {
                return a.rank < b.rank;
              });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].rank != i + 1) {
        throw ParseError("query " + qid + ": rank gap or duplicate at rank " +
                             std::to_string(entries[i].rank),
                         0);
      }
    }
    std::vector<RankedEntry> ranked;
    ranked.reserve(entries.size());
    for (auto& e : entries) {
      ranked.push_back({DocId(std::move(e.doc)), e.rank, e.score});
    }
    QueryId id(qid);
    lists.emplace(id, RankedList(id, std::move(ranked)));
  }
  return RunTable(std::move(tag), std::move(lists), depth);
}

void write_run(const RunTable& run, std::ostream& out) {
  if (run.tag().empty() && !run.lists().empty()) {
    throw Error("run tag is empty");
  }
  for (const auto& [qid, list] : run.lists()) {
    for (const auto& e : list.entries()) {
      out << qid.str() << " Q0 " << e.doc.str() << ' ' << e.rank << ' '
          << format_exact(e.score) << ' ' << run.tag() << '\n';
    }
  }
}

Qrels parse_qrels(std::istream& in) {
  std::vector<Judgment> judgments;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != 4) {
      throw ParseError("expected 4 columns, found " +
                           std::to_string(cols.size()),
                       lineno);
    }
    const auto grade = parse_number<int>(cols[3]);
    if (!grade) {
      throw ParseError("grade '" + std::string(cols[3]) +
                           "' is not an integer",
                       lineno);
    }
    if (*grade < 0) {
      throw ParseError("negative grade", lineno);
    }
    std::string key = std::string(cols[0]) + '\n' + std::string(cols[2]);
    if (!seen.insert(std::move(key)).second) {
      throw ParseError("duplicate judgment for (" + std::string(cols[0]) +
                           ", " + std::string(cols[2]) + ")",
                       lineno);
    }
    judgments.push_back(
        {QueryId(std::string(cols[0])), DocId(std::string(cols[2])), *grade});
  }
  return Qrels(std::move(judgments));
}

QuerySet parse_queries(std::istream& in) {
  auto rows = parse_tsv<QueryId>(in, "query");
  std::vector<Query> queries;
  queries.reserve(rows.size());
  for (auto& [id, text] : rows) {
    queries.push_back({std::move(id), std::move(text)});
  }
  return QuerySet(std::move(queries));
}

void write_queries(const QuerySet& queries, std::ostream& out) {
  for (const auto& q : queries.queries()) {
    out << q.id.str() << '\t' << q.text << '\n';
  }
}

std::vector<CorpusDoc> parse_corpus(std::istream& in) {
  auto rows = parse_tsv<DocId>(in, "document");
  std::vector<CorpusDoc> docs;
  docs.reserve(rows.size());
  for (auto& [id, text] : rows) {
    docs.push_back({std::move(id), std::move(text)});
  }
  return docs;
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<QueryId> ids, std::size_t dim,
                                 std::vector<float> data, std::string comment)
    : ids_(std::move(ids)),
      dim_(dim),
      data_(std::move(data)),
      comment_(std::move(comment)) {
  if (dim_ < 1) throw Error("embedding dimension must be positive");
  if (data_.size() != ids_.size() * dim_) {
    throw Error("embedding payload has " + std::to_string(data_.size()) +
                " values, expected " + std::to_string(ids_.size() * dim_));
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id.str()).second) {
      throw Error("duplicate embedding id " + id.str());
    }
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error("non-finite embedding value in row " +
                  ids_[i / dim_].str());
    }
  }
  if (comment_.find('\n') != std::string::npos) {
    throw Error("embedding comment must be a single line");
  }
}

std::optional<std::size_t> EmbeddingMatrix::index_of(const QueryId& id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return i;
  }
  return std::nullopt;
}

EmbeddingMatrix read_embeddings(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw ParseError("missing embedding header", 1);
  }
  std::string comment;
  if (const auto hash = header.find(" # "); hash != std::string::npos) {
    comment = header.substr(hash + 3);
    header.resize(hash);
  }
  const auto cols = split_ws(header);
  if (cols.size() != 4 || cols[0] != kEmbeddingMagic) {
    throw ParseError("bad embedding magic", 1);
  }
  if (cols[1] != kEmbeddingVersion) {
    throw ParseError("unsupported embedding version " + std::string(cols[1]),
                     1);
  }
  const auto n = parse_number<std::size_t>(cols[2]);
  const auto dim = parse_number<std::size_t>(cols[3]);
  if (!n || !dim || *dim == 0) {
    throw ParseError("bad embedding shape", 1);
  }

  std::vector<QueryId> ids;
  ids.reserve(*n);
  std::string line;
  for (std::size_t i = 0; i < *n; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(*n) + " id lines", i + 2);
    }
    try {
      ids.emplace_back(line);
    } catch (const Error& e) {
      throw ParseError(e.what(), i + 2);
    }
  }

  const std::size_t count = *n * *dim;
  std::vector<float> data(count);
  const auto bytes = static_cast<std::streamsize>(count * sizeof(float));
  in.read(reinterpret_cast<char*>(data.data()), bytes);
  if (in.gcount() != bytes) {
    throw ParseError("embedding payload truncated: expected " +
                         std::to_string(bytes) + " bytes, found " +
                         std::to_string(in.gcount()),
                     0);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("embedding payload longer than n*dim*4 bytes", 0);
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : data) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = __builtin_bswap32(bits);
      std::memcpy(&v, &bits, sizeof bits);
    }
  }
  try {
    return EmbeddingMatrix(std::move(ids), *dim, std::move(data),
                           std::move(comment));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_embeddings(const EmbeddingMatrix& m, std::ostream& out) {
  out << kEmbeddingMagic << ' ' << kEmbeddingVersion << ' ' << m.rows() << ' '
      << m.dim();
  if (!m.comment().empty()) out << " # " << m.comment();
  out << '\n';
  for (const auto& id : m.ids()) out << id.str() << '\n';
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(m.data().size() * sizeof(float)));
  } else {
    for (const float v : m.data()) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = __builtin_bswap32(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
}

ClusterAssignment parse_clusters(std::istream& in,
                                 std::optional<std::uint32_t> k) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing clusters header", 1);
  strip_cr(line);
  if (line != "qid,cluster") {
    throw ParseError("clusters header must be 'qid,cluster'", 1);
  }
  std::map<QueryId, std::uint32_t> groups;
  std::uint32_t max_group = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw ParseError("missing comma", lineno);
    }
    const std::string_view cell = std::string_view(line).substr(comma + 1);
    const auto group = parse_number<std::int64_t>(cell);
    if (!group) {
      throw ParseError("cluster id '" + std::string(cell) +
                           "' is not an integer",
                       lineno);
    }
    if (*group < 0 || (k && *group >= static_cast<std::int64_t>(*k)) ||
        *group > static_cast<std::int64_t>(UINT32_MAX - 1)) {
      throw ParseError("cluster id " + std::to_string(*group) +
                           " out of range",
                       lineno);
    }
    const auto g = static_cast<std::uint32_t>(*group);
    std::optional<QueryId> qid;
    try {
      qid.emplace(line.substr(0, comma));
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
    if (!groups.emplace(*qid, g).second) {
      throw ParseError("query " + qid->str() + " assigned twice", lineno);
    }
    max_group = std::max(max_group, g);
  }
  const std::uint32_t kk = k ? *k : (groups.empty() ? 1 : max_group + 1);
  return ClusterAssignment(kk, std::move(groups));
}

void write_clusters(const ClusterAssignment& clusters, std::ostream& out) {
  out << "qid,cluster\n";
  for (const auto& [qid, g] : clusters.groups()) {
    out << qid.str() << ',' << g << '\n';
  }
}

void write_table(const RetrievabilityTable& table, std::ostream& out) {
  out << "docid,score\n";
  for (const auto& e : table.scores()) {
    out << e.doc.str() << ',' << format_exact(e.score) << '\n';
  }
}

std::vector<std::pair<std::string, double>> parse_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing table header", 1);
  strip_cr(line);
  if (line != "docid,score") {
    throw ParseError("table header must be 'docid,score'", 1);
  }
  std::vector<std::pair<std::string, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError("missing comma", lineno);
    const auto score =
        parse_number<double>(std::string_view(line).substr(comma + 1));
    if (!score || !std::isfinite(*score)) {
      throw ParseError("score is not numeric", lineno);
    }
    rows.emplace_back(line.substr(0, comma), *score);
  }
  return rows;
}

namespace {

void write_json_string(std::ostream& out, std::string_view s) {
  out << '"';
  for (const char c : s) {
    switch (c) {
      case '"':
        out << "\\\"";
        break;
      case '\\':
        out << "\\\\";
        break;
      case '\n':
        out << "\\n";
        break;
      case '\t':
        out << "\\t";
        break;
      case '\r':
        out << "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

}  // namespace

void write_report(const FairnessReport& report, std::ostream& out) {
  out << "{\n";
  out << "  \"k\": " << report.k() << ",\n";
  out << "  \"per_group\": [";
  const auto groups = report.per_group();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    out << (i == 0 ? "\n" : ",\n");
    out << "    {\"group\": " << g.group << ", \"query_count\": "
        << g.query_count << ", \"pooled_doc_count\": " << g.pooled_doc_count
        << ", \"gini\": ";
    if (g.gini) {
      out << format_fixed6(*g.gini);
    } else {
      out << "null";
    }
    if (!g.flag.empty()) {
      out << ", \"flag\": ";
      write_json_string(out, g.flag);
    }
    out << '}';
  }
  out << (groups.empty() ? "],\n" : "\n  ],\n");
  const auto& a = report.aggregates();
  out << "  \"aggregates\": {\"min\": " << format_fixed6(a.min)
      << ", \"avg\": " << format_fixed6(a.avg)
      << ", \"max\": " << format_fixed6(a.max);
  if (report.global_gini()) {
    out << ", \"global\": " << format_fixed6(*report.global_gini());
  }
  out << "},\n";
  const auto& c = report.config();
  out << "  \"config\": {\"log_base\": ";
  write_json_string(out, to_string(c.log_base));
  out << ", \"depth\": " << c.depth << ", \"universe\": ";
  write_json_string(out, to_string(c.universe));
  out << ", \"mode\": ";
  write_json_string(out, c.mode);
  out << ", \"clustering\": ";
  write_json_string(out, c.clustering);
  out << "}\n}\n";
}

}  // namespace tretr
