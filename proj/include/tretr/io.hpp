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

// Readers and writers for every on-disk artifact.
//
//   run       qid Q0 docid rank score tag        (ASCII-whitespace separated)
//   qrels     qid 0 docid grade
//   queries   qid<TAB>text
//   corpus    docid<TAB>text
//   clusters  CSV with header "qid,cluster"
//   tables    CSV with header "docid,score"
//   matrices  "TRETR-EMB 1 <n> <dim>[ # comment]\n", n id lines, then n*dim
//             little-endian float32 values, row-major
//   reports   JSON object with keys k, per_group, aggregates, config

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tretr/types.hpp"

namespace tretr {

RunTable parse_run(std::istream& in, std::uint32_t depth = kDefaultDepth);
void write_run(const RunTable& run, std::ostream& out);

Qrels parse_qrels(std::istream& in);

QuerySet parse_queries(std::istream& in);
void write_queries(const QuerySet& queries, std::ostream& out);

struct CorpusDoc {
  DocId id;
  std::string text;
};
/// Same layout as the query TSV; document ids must be unique.
std::vector<CorpusDoc> parse_corpus(std::istream& in);

/// Dense row-major float32 matrix keyed by query id.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::vector<QueryId> ids, std::size_t dim,
                  std::vector<float> data, std::string comment = {});

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const QueryId> ids() const noexcept { return ids_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * dim_, dim_);
  }
  /// Free-form header annotation (e.g. the pooling used by the encoder).
  const std::string& comment() const noexcept { return comment_; }
  std::optional<std::size_t> index_of(const QueryId& id) const;

  friend bool operator==(const EmbeddingMatrix&,
                         const EmbeddingMatrix&) = default;

 private:
  std::vector<QueryId> ids_;
  std::size_t dim_;
  std::vector<float> data_;
  std::string comment_;
};

EmbeddingMatrix read_embeddings(std::istream& in);
void write_embeddings(const EmbeddingMatrix& m, std::ostream& out);

/// When `k` is absent it is inferred as (largest id + 1).
ClusterAssignment parse_clusters(std::istream& in,
                                 std::optional<std::uint32_t> k = {});
void write_clusters(const ClusterAssignment& clusters, std::ostream& out);

void write_table(const RetrievabilityTable& table, std::ostream& out);
std::vector<std::pair<std::string, double>> parse_table(std::istream& in);

void write_report(const FairnessReport& report, std::ostream& out);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);
/// Fixed six-decimal rendering used by reports and plot CSVs.
std::string format_fixed6(double value);

std::ifstream open_input(const std::filesystem::path& path,
                         bool binary = false);
std::ofstream open_output(const std::filesystem::path& path,
                          bool binary = false);

}  // namespace tretr
