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

#include "tretr/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tretr/io.hpp"
#include "tretr/simd/kernels.hpp"

namespace tretr {

double gini(std::span<const double> values) {
  if (values.empty()) throw Error("gini of an empty distribution");
  std::vector<double> sorted(values.begin(), values.end());
  for (const double v : sorted) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error("gini needs finite non-negative values");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double total = simd::sum(sorted);
  if (!(total > 0.0)) throw Error("degenerate distribution: values sum to 0");
  const double n = static_cast<double>(sorted.size());
  const double g =
      2.0 * simd::rank_weighted_sum(sorted) / (n * total) - (n + 1.0) / n;
  // Rounding can push a perfectly equal sample a hair below zero.
  return g < 0.0 ? 0.0 : g;
}

std::vector<double> materialize(const RetrievabilityTable& table) {
  std::vector<double> values;
  std::size_t size = table.size();
  if (const auto* full = std::get_if<FullCollection>(&table.universe())) {
    if (full->size < table.size()) {
      throw Error("collection size is smaller than the retrieved set");
    }
    size = full->size;
  }
  values.reserve(size);
  for (const auto& e : table.scores()) values.push_back(e.score);
  values.resize(size, 0.0);
  return values;
}

FairnessReport t_retrievability(
    std::span<const std::optional<RetrievabilityTable>> tables,
    ReportConfig config, std::optional<double> global_gini) {
  if (tables.empty()) throw Error("no groups to aggregate");
  std::vector<GroupFairness> groups(tables.size());
  const auto score_group = [&](std::size_t g) {
    auto& out = groups[g];
    out.group = static_cast<std::uint32_t>(g);
    const auto& table = tables[g];
    if (!table) {
      out.flag = "empty";
      return;
    }
    out.query_count = table->query_count();
    out.pooled_doc_count = table->size();
    const auto values = materialize(*table);
    double total = 0.0;
    for (const double v : values) total += v;
    if (values.empty() || !(total > 0.0)) {
      out.flag = "empty-pool";
      return;
    }
    out.gini = gini(values);
  };
  for (std::size_t g = 0; g < tables.size(); ++g) score_group(g);

  double lo = 0.0;
  double hi = 0.0;
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& g : groups) {
    if (!g.gini) continue;
    const double v = *g.gini;
    lo = used == 0 ? v : std::min(lo, v);
    hi = used == 0 ? v : std::max(hi, v);
    sum += v;
    ++used;
  }
  if (used == 0) throw Error("every group is empty; nothing to aggregate");
  // The exact mean lies in [min, max]; the rounded one may not.
  const double avg = std::clamp(sum / static_cast<double>(used), lo, hi);
  return FairnessReport(static_cast<std::uint32_t>(tables.size()),
                        std::move(groups), Aggregates{lo, avg, hi},
                        std::move(config), global_gini);
}

std::vector<SweepPoint> sweep_k(const RunTable& run, const QuerySet& queries,
                                const Representation& representation,
                                std::span<const std::uint32_t> k_values,
                                const KMeansOptions& kmeans_options,
                                const RetrievabilityOptions& options) {
  for (const auto k : k_values) {
    if (k == 0 || k > queries.size()) {
      throw Error("sweep k = " + std::to_string(k) + " outside [1, " +
                  std::to_string(queries.size()) + "]");
    }
  }
  const auto global = retrievability_global(run, queries, options);
  const double global_gini = gini(materialize(global));

  std::vector<SweepPoint> out;
  out.reserve(k_values.size());
  for (const auto k : k_values) {
    KMeansOptions opt = kmeans_options;
    opt.k = k;
    const auto clusters = cluster_queries(queries, representation, opt);
    const auto tables = retrievability_local(run, queries, clusters, options);
    ReportConfig config;
    config.log_base = options.log_base;
    config.depth = options.depth;
    config.universe = options.universe;
    config.mode = to_string(options.mode);
    config.clustering = describe_clustering(representation, opt);
    out.push_back({k, t_retrievability(tables, std::move(config),
                                       global_gini)});
  }
  return out;
}

void write_sweep_csv(std::span<const SweepPoint> sweep, std::ostream& out) {
  out << "k,min,avg,max\n";
  for (const auto& p : sweep) {
    const auto& a = p.report.aggregates();
    out << p.k << ',' << format_fixed6(a.min) << ',' << format_fixed6(a.avg)
        << ',' << format_fixed6(a.max) << '\n';
  }
}

}  // namespace tretr
