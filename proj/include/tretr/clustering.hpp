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

// Topical query grouping: TF-IDF vectorization and Lloyd's K-means over
// either sparse or dense points.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tretr/io.hpp"
#include "tretr/types.hpp"

namespace tretr {

/// Indices strictly ascending, values finite and positive.
class SparseVector {
 public:
  SparseVector() = default;
  SparseVector(std::vector<std::uint32_t> indices, std::vector<double> values);

  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t nnz() const noexcept { return indices_.size(); }
  bool is_zero() const noexcept { return indices_.empty(); }
  double norm() const;

 private:
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

struct TfidfVectors {
  /// Ordinal -> term, in order of first occurrence across the query set.
  std::vector<std::string> vocabulary;
  /// One L2-normalized vector per query, in query-set order.
  std::vector<SparseVector> vectors;
};

/// tf = raw count, idf = ln((Nq + 1) / (df + 1)) + 1, weight = tf * idf.
TfidfVectors tfidf_vectorize(const QuerySet& queries);

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim_, dim_);
  }

 private:
  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> data_;
};

class SparseMatrix {
 public:
  SparseMatrix(std::size_t dim, std::vector<SparseVector> rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const SparseVector& row(std::size_t i) const { return rows_[i]; }

 private:
  std::size_t dim_;
  std::vector<SparseVector> rows_;
};

/// k dense centroids plus the objective (sum of squared distances) of the
/// assignment they produced.
class CentroidSet {
 public:
  CentroidSet(std::size_t k, std::size_t dim, std::vector<double> data,
              double objective);

  std::size_t k() const noexcept { return k_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> centroid(std::size_t c) const {
    return std::span<const double>(data_).subspan(c * dim_, dim_);
  }
  double objective() const noexcept { return objective_; }

 private:
  std::size_t k_;
  std::size_t dim_;
  std::vector<double> data_;
  double objective_;
};

struct PlusPlusInit {};
struct ExplicitInit {
  std::vector<std::size_t> indices;
};
using KMeansInit = std::variant<PlusPlusInit, ExplicitInit>;

struct KMeansOptions {
  std::uint32_t k = 1;
  std::uint64_t seed = 0;
  KMeansInit init = PlusPlusInit{};
  std::uint32_t max_iter = 100;
  double tol = 1e-4;
  /// Project every point onto the unit sphere first. Zero vectors are then
  /// kept out of seeding, updates and the objective, and land in group 0.
  bool normalize = true;
  unsigned threads = 1;
};

struct KMeansResult {
  /// Group per point, in input order.
  std::vector<std::uint32_t> labels;
  CentroidSet centroids;
  /// Objective after every assignment step.
  std::vector<double> objective_history;
  std::uint32_t iterations = 0;
  bool converged = false;
};

KMeansResult kmeans(const DenseMatrix& points, const KMeansOptions& options);
KMeansResult kmeans(const SparseMatrix& points, const KMeansOptions& options);

struct TfidfRepresentation {};
struct DenseRepresentation {
  const EmbeddingMatrix* matrix;
};
using Representation = std::variant<TfidfRepresentation, DenseRepresentation>;

ClusterAssignment cluster_queries(const QuerySet& queries,
                                  const Representation& representation,
                                  const KMeansOptions& options);

/// Human-readable clustering descriptor recorded in reports.
std::string describe_clustering(const Representation& representation,
                                const KMeansOptions& options);

}  // namespace tretr
