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

#include "tretr/retrievability.hpp"

#include <algorithm>
#include <charconv>
#include <string_view>
#include <unordered_map>

#include "tretr/parallel.hpp"

namespace tretr {

std::string to_string(const RetrievabilityMode& mode) {
  if (const auto* ind = std::get_if<Indicator>(&mode)) {
    return "indicator:" + std::to_string(ind->cutoff);
  }
  return "reciprocal-log";
}

RetrievabilityMode parse_mode(std::string_view text) {
  if (text == "reciprocal-log") return ReciprocalLog{};
  constexpr std::string_view prefix = "indicator:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::uint32_t c = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), c);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && c > 0) {
      return Indicator{c};
    }
  }
  throw Error("unknown mode '" + std::string(text) +
              "' (expected reciprocal-log or indicator:<c>)");
}

double max_retrievability(const RetrievabilityOptions& options) {
  if (std::holds_alternative<Indicator>(options.mode)) return 1.0;
  return 1.0 / log_in_base(2.0, options.log_base);
}

namespace {

using Contribution = std::pair<const DocId*, double>;

// Weight by rank, index 0 = rank 1; ranks past the end weigh nothing.
std::vector<double> rank_weights(const RunTable& run,
                                 const RetrievabilityOptions& options) {
  if (options.depth < 1) throw Error("depth must be positive");
  const std::uint32_t depth = std::min(options.depth, run.depth());
  std::vector<double> w(depth, 0.0);
  if (const auto* ind = std::get_if<Indicator>(&options.mode)) {
    if (ind->cutoff < 1) throw Error("indicator cutoff must be positive");
    std::fill(w.begin(), w.begin() + std::min(ind->cutoff, depth), 1.0);
  } else {
    for (std::uint32_t r = 1; r <= depth; ++r) {
      w[r - 1] = 1.0 / log_in_base(1.0 + r, options.log_base);
    }
  }
  return w;
}

void check_run_queries(const RunTable& run, const QuerySet& queries) {
  for (const auto& [qid, list] : run.lists()) {
    if (!queries.contains(qid)) {
      throw Error("run contains query " + qid.str() +
                  " that is not in the query set");
    }
  }
}

// Per-query contributions, computed independently and indexed like
// run.lists().
std::vector<std::vector<Contribution>> contributions(
    const RunTable& run, const std::vector<double>& weights,
    unsigned threads) {
  std::vector<const RankedList*> lists;
  lists.reserve(run.lists().size());
  for (const auto& [qid, list] : run.lists()) lists.push_back(&list);
  std::vector<std::vector<Contribution>> out(lists.size());
  parallel_for(lists.size(), threads, [&](std::size_t i) {
    const auto entries = lists[i]->entries();
    const std::size_t n = std::min(entries.size(), weights.size());
    auto& dst = out[i];
    dst.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (weights[r] > 0.0) dst.emplace_back(&entries[r].doc, weights[r]);
    }
  });
  return out;
}

// Merges contributions of the listed run positions (ascending QueryId order)
// and divides by the group's query count.
RetrievabilityTable merge(
    const std::vector<std::vector<Contribution>>& per_query,
    const std::vector<std::size_t>& positions, std::size_t query_count,
    const Universe& universe, double max_score) {
  std::unordered_map<std::string_view, std::pair<const DocId*, double>> acc;
  for (const auto p : positions) {
    for (const auto& [doc, w] : per_query[p]) {
      auto [it, inserted] = acc.try_emplace(doc->str(), doc, 0.0);
      it->second.second += w;
    }
  }
  std::vector<DocScore> scores;
  scores.reserve(acc.size());
  const double n = static_cast<double>(query_count);
  for (const auto& [key, entry] : acc) {
    scores.push_back({*entry.first, entry.second / n});
  }
  std::sort(scores.begin(), scores.end(),
            [](const DocScore& a, const DocScore& b) { return a.doc < b.doc; });
  return RetrievabilityTable(std::move(scores), query_count, universe,
                             max_score);
}

}  // namespace

RetrievabilityTable retrievability_global(const RunTable& run,
                                          const QuerySet& queries,
                                          const RetrievabilityOptions& options) {
  const auto weights = rank_weights(run, options);
  check_run_queries(run, queries);
  if (queries.empty()) throw Error("query set is empty");
  const auto per_query = contributions(run, weights, options.threads);
  std::vector<std::size_t> all(per_query.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return merge(per_query, all, queries.size(), options.universe,
               max_retrievability(options));
}

std::vector<std::optional<RetrievabilityTable>> retrievability_local(
    const RunTable& run, const QuerySet& queries,
    const ClusterAssignment& clusters, const RetrievabilityOptions& options) {
  const auto weights = rank_weights(run, options);
  check_run_queries(run, queries);
  clusters.check_covers(queries);
  const auto per_query = contributions(run, weights, options.threads);

  // Run positions per group, ascending QueryId because run.lists() is.
  std::vector<std::vector<std::size_t>> positions(clusters.k());
  std::size_t pos = 0;
  for (const auto& [qid, list] : run.lists()) {
    positions[*clusters.group_of(qid)].push_back(pos++);
  }
  const auto sizes = clusters.group_sizes();
  const double max_score = max_retrievability(options);

  std::vector<std::optional<RetrievabilityTable>> tables(clusters.k());
  parallel_for(clusters.k(), options.threads, [&](std::size_t g) {
    if (sizes[g] == 0) return;
    tables[g].emplace(merge(per_query, positions[g], sizes[g],
                            PooledRetrieved{}, max_score));
  });
  return tables;
}

RetrievabilityTable retrievability_indicator(const RunTable& run,
                                             const QuerySet& queries,
                                             std::uint32_t cutoff,
                                             Universe universe) {
  if (cutoff < 1) throw Error("indicator cutoff must be positive");
  RetrievabilityOptions options;
  options.depth = run.depth();
  options.universe = universe;
  options.mode = Indicator{cutoff};
  return retrievability_global(run, queries, options);
}

}  // namespace tretr
