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

// A small in-memory BM25 engine: tokenizer, inverted index, ranked search and
// a word/bigram sampler for simulated query sets.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tretr/io.hpp"
#include "tretr/types.hpp"

namespace tretr {

/// Lowercases ASCII letters and splits on every maximal run of characters
/// that are not ASCII alphanumerics. Bytes >= 0x80 count as word characters,
/// so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;
};

using TermId = std::uint32_t;

class InvertedIndex {
 public:
  /// Term ids follow lexicographic term order, document ordinals follow
  /// corpus order. Throws on an empty corpus, duplicate ids, or a corpus
  /// without a single token.
  static InvertedIndex build(std::span<const CorpusDoc> corpus);

  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  double avgdl() const noexcept { return avgdl_; }
  std::span<const DocId> doc_ids() const noexcept { return doc_ids_; }
  std::span<const std::uint32_t> doc_lengths() const noexcept {
    return doc_lengths_;
  }

  std::size_t vocab_size() const noexcept { return terms_.size(); }
  std::optional<TermId> term_id(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_[id]; }
  std::span<const Posting> postings(TermId id) const {
    return postings_[id];
  }
  std::uint32_t df(TermId id) const {
    return static_cast<std::uint32_t>(postings_[id].size());
  }
  /// Collection frequency: total occurrences across all documents.
  std::uint64_t cf(TermId id) const { return cf_[id]; }
  /// Distinct adjacent term pairs, ascending.
  std::span<const std::pair<TermId, TermId>> bigrams() const noexcept {
    return bigrams_;
  }

 private:
  InvertedIndex() = default;

  std::vector<DocId> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avgdl_ = 0.0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> term_ids_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::uint64_t> cf_;
  std::vector<std::pair<TermId, TermId>> bigrams_;
};

/// BM25 with idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1). Only documents
/// containing a query term are ranked; ties go to the smaller DocId.
RankedList bm25_search(const InvertedIndex& index, const QueryId& query,
                       std::string_view text, const Bm25Params& params,
                       std::uint32_t depth = kDefaultDepth);

/// Searches every query; queries without hits get no list.
RunTable bm25_run(const InvertedIndex& index, const QuerySet& queries,
                  const Bm25Params& params, std::uint32_t depth,
                  std::string tag, unsigned threads = 1);

/// Samples `count` queries: unigrams weighted by collection frequency, then
/// round(count * bigram_fraction) bigrams drawn uniformly from the distinct
/// adjacent pairs. Ids are "synth-1" .. "synth-<count>".
QuerySet generate_synthetic_queries(const InvertedIndex& index,
                                    std::size_t count, double bigram_fraction,
                                    std::uint64_t seed);

}  // namespace tretr
