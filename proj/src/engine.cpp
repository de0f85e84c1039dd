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

#include "tretr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "tretr/parallel.hpp"

namespace tretr {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

InvertedIndex InvertedIndex::build(std::span<const CorpusDoc> corpus) {
  if (corpus.empty()) throw Error("cannot index an empty corpus");

  InvertedIndex index;
  std::unordered_set<std::string_view> seen_ids;
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(corpus.size());
  std::unordered_set<std::string> vocab;
  std::uint64_t total_length = 0;
  for (const auto& doc : corpus) {
    if (!seen_ids.insert(doc.id.str()).second) {
      throw Error("duplicate document id " + doc.id.str());
    }
    tokens.push_back(tokenize(doc.text));
    for (const auto& t : tokens.back()) vocab.insert(t);
    index.doc_ids_.push_back(doc.id);
    index.doc_lengths_.push_back(
        static_cast<std::uint32_t>(tokens.back().size()));
    total_length += tokens.back().size();
  }
  index.avgdl_ = static_cast<double>(total_length) /
                 static_cast<double>(corpus.size());
  if (!(index.avgdl_ > 0.0)) {
    throw Error("corpus has no tokens (average document length is 0)");
  }

  index.terms_.assign(vocab.begin(), vocab.end());
  std::sort(index.terms_.begin(), index.terms_.end());
  index.term_ids_.reserve(index.terms_.size());
  for (TermId id = 0; id < index.terms_.size(); ++id) {
    index.term_ids_.emplace(index.terms_[id], id);
  }
  index.postings_.resize(index.terms_.size());
  index.cf_.assign(index.terms_.size(), 0);

  std::vector<TermId> ids;
  for (std::uint32_t d = 0; d < tokens.size(); ++d) {
    ids.clear();
    for (const auto& t : tokens[d]) ids.push_back(index.term_ids_.at(t));
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      index.bigrams_.emplace_back(ids[i], ids[i + 1]);
    }
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j < ids.size() && ids[j] == ids[i]) ++j;
      index.postings_[ids[i]].push_back(
          {d, static_cast<std::uint32_t>(j - i)});
      index.cf_[ids[i]] += j - i;
      i = j;
    }
  }
  std::sort(index.bigrams_.begin(), index.bigrams_.end());
  index.bigrams_.erase(
      std::unique(index.bigrams_.begin(), index.bigrams_.end()),
      index.bigrams_.end());
  return index;
}

std::optional<TermId> InvertedIndex::term_id(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

RankedList bm25_search(const InvertedIndex& index, const QueryId& query,
                       std::string_view text, const Bm25Params& params,
                       std::uint32_t depth) {
  params.validate();
  if (depth < 1) throw Error("depth must be positive");

  std::vector<TermId> terms;
  for (const auto& t : tokenize(text)) {
    if (auto id = index.term_id(t)) terms.push_back(*id);
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  const double n = static_cast<double>(index.doc_count());
  const auto lengths = index.doc_lengths();
  std::vector<double> acc(index.doc_count(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const TermId t : terms) {
    const double df = index.df(t);
    const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
    for (const auto& p : index.postings(t)) {
      const double tf = p.tf;
      const double norm =
          1.0 - params.b + params.b * lengths[p.doc] / index.avgdl();
      if (acc[p.doc] == 0.0) touched.push_back(p.doc);
      acc[p.doc] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
    }
  }

  std::vector<std::uint32_t> hits;
  hits.reserve(touched.size());
  for (const auto d : touched) {
    if (acc[d] > 0.0) hits.push_back(d);
  }
  const auto ids = index.doc_ids();
  const auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (acc[a] != acc[b]) return acc[a] > acc[b];
    return ids[a] < ids[b];
  };
  const std::size_t keep = std::min<std::size_t>(depth, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(keep),
                    hits.end(), better);

  std::vector<RankedEntry> entries;
  entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    entries.push_back(
        {ids[hits[i]], static_cast<std::uint32_t>(i + 1), acc[hits[i]]});
  }
  return RankedList(query, std::move(entries));
}

RunTable bm25_run(const InvertedIndex& index, const QuerySet& queries,
                  const Bm25Params& params, std::uint32_t depth,
                  std::string tag, unsigned threads) {
  std::vector<std::optional<RankedList>> results(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    const auto& q = queries[i];
    auto list = bm25_search(index, q.id, q.text, params, depth);
    if (!list.empty()) results[i].emplace(std::move(list));
  });
  std::map<QueryId, RankedList> lists;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) lists.emplace(queries[i].id, std::move(*results[i]));
  }
  return RunTable(std::move(tag), std::move(lists), depth);
}

QuerySet generate_synthetic_queries(const InvertedIndex& index,
                                    std::size_t count, double bigram_fraction,
                                    std::uint64_t seed) {
  if (count == 0) throw Error("query count must be positive");
  if (!(bigram_fraction >= 0.0 && bigram_fraction <= 1.0)) {
    throw Error("bigram fraction must lie in [0, 1]");
  }
  const auto n_bigrams = static_cast<std::size_t>(
      std::llround(static_cast<double>(count) * bigram_fraction));
  if (n_bigrams > 0 && index.bigrams().empty()) {
    throw Error("corpus has no adjacent term pairs to sample bigrams from");
  }
  const std::size_t n_unigrams = count - n_bigrams;

  std::vector<std::uint64_t> cumulative(index.vocab_size());
  std::uint64_t total = 0;
  for (TermId t = 0; t < index.vocab_size(); ++t) {
    total += index.cf(t);
    cumulative[t] = total;
  }

  std::mt19937_64 rng(seed);
  std::vector<Query> queries;
  queries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string text;
    if (i < n_unigrams) {
      std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
      const auto r = pick(rng);
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), r);
      text = index.term(static_cast<TermId>(it - cumulative.begin()));
    } else {
      const auto pairs = index.bigrams();
      std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
      const auto& [a, b] = pairs[pick(rng)];
      text = index.term(a) + ' ' + index.term(b);
    }
    queries.push_back(
        {QueryId("synth-" + std::to_string(i + 1)), std::move(text)});
  }
  return QuerySet(std::move(queries));
}

}  // namespace tretr
