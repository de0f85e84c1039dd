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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tretr/clustering.hpp"
#include "tretr/retrievability.hpp"
#include "tretr/types.hpp"

namespace tretr {

/// Gini coefficient of a non-negative sample without small-sample
/// correction:
///
///   G = 2 * sum_i i * x_(i) / (n * sum x) - (n + 1) / n
///
/// over the values sorted ascending (1-based i). Throws on an empty input, a
/// negative or non-finite value, or an all-zero input.
double gini(std::span<const double> values);

/// The score distribution a Gini is taken over: retrieved scores, padded
/// with zeros up to N for a FullCollection(N) universe.
std::vector<double> materialize(const RetrievabilityTable& table);

/// Per-group Ginis and their (min, unweighted mean, max). Empty groups and
/// groups whose pool is empty are flagged and left out of the aggregates.
FairnessReport t_retrievability(
    std::span<const std::optional<RetrievabilityTable>> tables,
    ReportConfig config = {}, std::optional<double> global_gini = {});

struct SweepPoint {
  std::uint32_t k;
  FairnessReport report;
};

/// Clusters, localizes and aggregates once per K.
std::vector<SweepPoint> sweep_k(const RunTable& run, const QuerySet& queries,
                                const Representation& representation,
                                std::span<const std::uint32_t> k_values,
                                const KMeansOptions& kmeans_options,
                                const RetrievabilityOptions& options);

/// Plot-ready "k,min,avg,max" CSV with a header row.
void write_sweep_csv(std::span<const SweepPoint> sweep, std::ostream& out);

}  // namespace tretr
