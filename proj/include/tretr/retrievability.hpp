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

// Document retrievability over a query set:
//
//   r(D) = 1/|Q| * sum_{q in Q} w(rank(D; q))
//
// with w(rank) = 1 / log(1 + rank) inside the top `depth` (reciprocal-log
// form) or w(rank) = [rank <= c] (indicator form), and w = 0 for documents a
// query did not retrieve. Queries without a ranked list still count in |Q|.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tretr/types.hpp"

namespace tretr {

struct ReciprocalLog {};
struct Indicator {
  std::uint32_t cutoff;
};
using RetrievabilityMode = std::variant<ReciprocalLog, Indicator>;

std::string to_string(const RetrievabilityMode& mode);
/// Accepts "reciprocal-log" or "indicator:<c>".
RetrievabilityMode parse_mode(std::string_view text);

struct RetrievabilityOptions {
  std::uint32_t depth = kDefaultDepth;
  LogBase log_base = LogBase::kE;
  Universe universe = PooledRetrieved{};
  RetrievabilityMode mode = ReciprocalLog{};
  unsigned threads = 1;
};

/// Largest attainable score: 1 / log(2) in the chosen base, or 1 for the
/// indicator form.
double max_retrievability(const RetrievabilityOptions& options);

/// Throws if the run names a query outside `queries` or depth < 1.
RetrievabilityTable retrievability_global(
    const RunTable& run, const QuerySet& queries,
    const RetrievabilityOptions& options = {});

/// One table per group id in [0, k), each normalized by its own group size
/// and pooled over the group's retrieved documents. Empty groups yield
/// std::nullopt.
std::vector<std::optional<RetrievabilityTable>> retrievability_local(
    const RunTable& run, const QuerySet& queries,
    const ClusterAssignment& clusters,
    const RetrievabilityOptions& options = {});

/// Top-c indicator form.
RetrievabilityTable retrievability_indicator(
    const RunTable& run, const QuerySet& queries, std::uint32_t cutoff,
    Universe universe = PooledRetrieved{});

}  // namespace tretr
