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

#include "tretr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "tretr/engine.hpp"
#include "tretr/parallel.hpp"
#include "tretr/simd/kernels.hpp"

namespace tretr {

SparseVector::SparseVector(std::vector<std::uint32_t> indices,
                           std::vector<double> values)
    : indices_(std::move(indices)), values_(std::move(values)) {
  if (indices_.size() != values_.size()) {
    throw Error("sparse vector index/value length mismatch");
  }
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    if (j > 0 && indices_[j - 1] >= indices_[j]) {
      throw Error("sparse vector indices must be strictly ascending");
    }
    if (!(std::isfinite(values_[j]) && values_[j] > 0.0)) {
      throw Error("sparse vector values must be finite and positive");
    }
  }
}

double SparseVector::norm() const {
  return std::sqrt(simd::dot(values_, values_));
}

TfidfVectors tfidf_vectorize(const QuerySet& queries) {
  if (queries.empty()) throw Error("cannot vectorize an empty query set");

  TfidfVectors out;
  std::unordered_map<std::string, std::uint32_t> ordinals;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts;
  counts.reserve(queries.size());
  std::vector<std::uint32_t> df;
  for (const auto& q : queries.queries()) {
    std::vector<std::uint32_t> ids;
    for (auto& t : tokenize(q.text)) {
      auto [it, inserted] = ordinals.emplace(
          t, static_cast<std::uint32_t>(out.vocabulary.size()));
      if (inserted) {
        out.vocabulary.push_back(std::move(t));
        df.push_back(0);
      }
      ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> tf;
    for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j < ids.size() && ids[j] == ids[i]) ++j;
      tf.emplace_back(ids[i], static_cast<std::uint32_t>(j - i));
      ++df[ids[i]];
      i = j;
    }
    counts.push_back(std::move(tf));
  }

  const double nq = static_cast<double>(queries.size());
  out.vectors.reserve(counts.size());
  for (const auto& tf : counts) {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    for (const auto& [term, count] : tf) {
      const double idf = std::log((nq + 1.0) / (df[term] + 1.0)) + 1.0;
      indices.push_back(term);
      values.push_back(count * idf);
    }
    const double norm = std::sqrt(simd::dot(values, values));
    for (auto& v : values) v /= norm;
    out.vectors.emplace_back(std::move(indices), std::move(values));
  }
  return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t dim,
                         std::vector<double> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw Error("dense matrix dimension must be positive");
  if (data_.size() != rows_ * dim_) {
    throw Error("dense matrix data length does not match its shape");
  }
  for (const double v : data_) {
    if (!std::isfinite(v)) throw Error("dense matrix has non-finite entries");
  }
}

SparseMatrix::SparseMatrix(std::size_t dim, std::vector<SparseVector> rows)
    : dim_(dim), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (!r.is_zero() && r.indices().back() >= dim_) {
      throw Error("sparse row index exceeds matrix dimension");
    }
  }
}

CentroidSet::CentroidSet(std::size_t k, std::size_t dim,
                         std::vector<double> data, double objective)
    : k_(k), dim_(dim), data_(std::move(data)), objective_(objective) {
  if (k_ == 0) throw Error("centroid set needs k >= 1");
  if (data_.size() != k_ * dim_) throw Error("centroid data length mismatch");
  for (const double v : data_) {
    if (std::isnan(v)) throw Error("centroid has NaN entries");
  }
  if (!(objective_ >= 0.0)) throw Error("objective must be non-negative");
}

namespace {

// Point storage policies for the Lloyd loop. Both expose:
//   n, dim, zero[i]
//   distance(i, centroid, centroid_norm2)
//   add_to(i, sums), copy_to(i, centroid)

class DensePoints {
 public:
  DensePoints(const DenseMatrix& m, bool normalize)
      : n(m.rows()), dim(m.dim()), zero(n, false), data_(n * dim) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = m.row(i);
      double* dst = data_.data() + i * dim;
      std::copy(src.begin(), src.end(), dst);
      if (normalize) {
        const double norm = std::sqrt(simd::dot(src, src));
        if (norm == 0.0) {
          zero[i] = true;
        } else {
          for (std::size_t j = 0; j < dim; ++j) dst[j] /= norm;
        }
      }
    }
  }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim, dim);
  }
  double distance(std::size_t i, std::span<const double> c, double) const {
    return simd::squared_distance(row(i), c);
  }
  void add_to(std::size_t i, std::span<double> sums) const {
    simd::axpy(1.0, row(i), sums);
  }
  void copy_to(std::size_t i, std::span<double> c) const {
    const auto r = row(i);
    std::copy(r.begin(), r.end(), c.begin());
  }

  std::size_t n;
  std::size_t dim;
  std::vector<bool> zero;

 private:
  std::vector<double> data_;
};

class SparsePoints {
 public:
  SparsePoints(const SparseMatrix& m, bool normalize)
      : n(m.rows()), dim(m.dim()), zero(n, false) {
    rows_.reserve(n);
    norm2_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = m.row(i);
      std::vector<std::uint32_t> idx(r.indices().begin(), r.indices().end());
      std::vector<double> val(r.values().begin(), r.values().end());
      if (normalize) {
        const double norm = r.norm();
        if (norm == 0.0) {
          zero[i] = true;
        } else {
          for (auto& v : val) v /= norm;
        }
      }
      norm2_.push_back(simd::dot(val, val));
      rows_.emplace_back(std::move(idx), std::move(val));
    }
  }

  // ||x - c||^2 = ||x||^2 - 2 x.c + ||c||^2
  double distance(std::size_t i, std::span<const double> c,
                  double c_norm2) const {
    const auto& r = rows_[i];
    const double d =
        norm2_[i] - 2.0 * simd::sparse_dot(r.indices(), r.values(), c) +
        c_norm2;
    return d > 0.0 ? d : 0.0;
  }
  void add_to(std::size_t i, std::span<double> sums) const {
    const auto& r = rows_[i];
    const auto idx = r.indices();
    const auto val = r.values();
    for (std::size_t j = 0; j < idx.size(); ++j) sums[idx[j]] += val[j];
  }
  void copy_to(std::size_t i, std::span<double> c) const {
    std::fill(c.begin(), c.end(), 0.0);
    add_to(i, c);
  }

  std::size_t n;
  std::size_t dim;
  std::vector<bool> zero;

 private:
  std::vector<SparseVector> rows_;
  std::vector<double> norm2_;
};

template <class Points>
class Lloyd {
 public:
  Lloyd(const Points& points, const KMeansOptions& options)
      : pts_(points),
        opt_(options),
        k_(options.k),
        centroids_(static_cast<std::size_t>(options.k) * points.dim, 0.0),
        cnorm2_(options.k, 0.0),
        labels_(points.n, 0),
        dists_(points.n, 0.0) {
    for (std::size_t i = 0; i < pts_.n; ++i) {
      if (!pts_.zero[i]) eligible_.push_back(i);
    }
  }

  KMeansResult run() {
    if (k_ == 0) throw Error("k must be positive");
    if (k_ > pts_.n) {
      throw Error("k = " + std::to_string(k_) + " exceeds the " +
                  std::to_string(pts_.n) + " points");
    }
    if (k_ > eligible_.size()) {
      throw Error("k = " + std::to_string(k_) + " exceeds the " +
                  std::to_string(eligible_.size()) + " non-zero points");
    }
    if (opt_.max_iter == 0) throw Error("max_iter must be positive");
    if (!(opt_.tol > 0.0)) throw Error("tol must be positive");

    if (const auto* init = std::get_if<ExplicitInit>(&opt_.init)) {
      seed(*init);
    } else {
      seed(std::get<PlusPlusInit>(opt_.init));
    }

    KMeansResult result{{}, CentroidSet(1, 1, {0.0}, 0.0), {}, 0, false};
    double objective = 0.0;
    for (std::uint32_t iter = 1; iter <= opt_.max_iter; ++iter) {
      objective = assign();
      result.objective_history.push_back(objective);
      result.iterations = iter;
      if (iter > 1) {
        const double prev = result.objective_history[iter - 2];
        if (prev == 0.0 || (prev - objective) / prev < opt_.tol) {
          result.converged = true;
          break;
        }
      }
      if (iter == opt_.max_iter) break;
      update();
    }
    result.labels = labels_;
    result.centroids = CentroidSet(k_, pts_.dim, centroids_, objective);
    return result;
  }

 private:
  std::span<double> centroid(std::size_t c) {
    return std::span<double>(centroids_).subspan(c * pts_.dim, pts_.dim);
  }
  std::span<const double> centroid(std::size_t c) const {
    return std::span<const double>(centroids_).subspan(c * pts_.dim,
                                                       pts_.dim);
  }
  void refresh_norm(std::size_t c) {
    cnorm2_[c] = simd::dot(centroid(c), centroid(c));
  }
  double distance_to(std::size_t i, std::size_t c) const {
    return pts_.distance(i, centroid(c), cnorm2_[c]);
  }

  void place(std::size_t c, std::size_t point) {
    pts_.copy_to(point, centroid(c));
    refresh_norm(c);
  }

  void seed(const ExplicitInit& init) {
    if (init.indices.size() != k_) {
      throw Error("explicit init lists " +
                  std::to_string(init.indices.size()) + " indices for k = " +
                  std::to_string(k_));
    }
    std::vector<bool> used(pts_.n, false);
    for (std::size_t c = 0; c < k_; ++c) {
      const std::size_t i = init.indices[c];
      if (i >= pts_.n) throw Error("explicit init index out of range");
      if (pts_.zero[i]) throw Error("explicit init names a zero vector");
      if (used[i]) throw Error("explicit init repeats an index");
      used[i] = true;
      place(c, i);
    }
  }

  void seed(const PlusPlusInit&) {
    std::mt19937_64 rng(opt_.seed);
    std::vector<bool> chosen(pts_.n, false);
    std::uniform_int_distribution<std::size_t> first(0, eligible_.size() - 1);
    std::size_t pick = eligible_[first(rng)];
    place(0, pick);
    chosen[pick] = true;

    std::vector<double> d2(pts_.n, 0.0);
    for (const auto i : eligible_) d2[i] = distance_to(i, 0);
    for (std::size_t c = 1; c < k_; ++c) {
      double total = 0.0;
      for (const auto i : eligible_) total += d2[i];
      pick = pts_.n;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        const double r = u(rng);
        double cum = 0.0;
        for (const auto i : eligible_) {
          if (d2[i] <= 0.0) continue;
          cum += d2[i];
          pick = i;
          if (cum > r) break;
        }
      } else {
        // Every remaining point coincides with a chosen centre.
        for (const auto i : eligible_) {
          if (!chosen[i]) {
            pick = i;
            break;
          }
        }
      }
      place(c, pick);
      chosen[pick] = true;
      for (const auto i : eligible_) {
        d2[i] = std::min(d2[i], distance_to(i, c));
      }
    }
  }

  double assign() {
    parallel_for(pts_.n, opt_.threads, [this](std::size_t i) {
      if (pts_.zero[i]) {
        labels_[i] = 0;
        dists_[i] = 0.0;
        return;
      }
      std::uint32_t best = 0;
      double best_d = distance_to(i, 0);
      for (std::uint32_t c = 1; c < k_; ++c) {
        const double d = distance_to(i, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels_[i] = best;
      dists_[i] = best_d;
    });
    double objective = 0.0;
    for (const auto i : eligible_) objective += dists_[i];
    return objective;
  }

  void update() {
    std::vector<double> previous = centroids_;
    std::fill(centroids_.begin(), centroids_.end(), 0.0);
    std::vector<std::size_t> sizes(k_, 0);
    for (const auto i : eligible_) {
      pts_.add_to(i, centroid(labels_[i]));
      ++sizes[labels_[i]];
    }
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k_; ++c) {
      auto row = centroid(c);
      if (sizes[c] == 0) {
        const auto old = std::span<const double>(previous).subspan(
            c * pts_.dim, pts_.dim);
        std::copy(old.begin(), old.end(), row.begin());
        empty.push_back(c);
      } else {
        const double count = static_cast<double>(sizes[c]);
        for (auto& v : row) v /= count;
      }
      refresh_norm(c);
    }
    if (!empty.empty()) repair(empty, sizes);
  }

  // Reseeds each empty cluster with the point farthest from its centroid,
  // never emptying the donor cluster.
  void repair(const std::vector<std::size_t>& empty,
              std::vector<std::size_t>& sizes) {
    std::vector<double> d(pts_.n, 0.0);
    for (const auto i : eligible_) d[i] = distance_to(i, labels_[i]);
    std::vector<bool> moved(pts_.n, false);
    for (const auto c : empty) {
      std::size_t far = pts_.n;
      double far_d = -1.0;
      for (const auto i : eligible_) {
        if (moved[i] || sizes[labels_[i]] <= 1) continue;
        if (d[i] > far_d) {
          far_d = d[i];
          far = i;
        }
      }
      if (far == pts_.n || far_d <= 0.0) continue;
      place(c, far);
      --sizes[labels_[far]];
      labels_[far] = static_cast<std::uint32_t>(c);
      sizes[c] = 1;
      moved[far] = true;
    }
  }

  const Points& pts_;
  const KMeansOptions& opt_;
  std::uint32_t k_;
  std::vector<double> centroids_;
  std::vector<double> cnorm2_;
  std::vector<std::uint32_t> labels_;
  std::vector<double> dists_;
  std::vector<std::size_t> eligible_;
};

}  // namespace

KMeansResult kmeans(const DenseMatrix& points, const KMeansOptions& options) {
  const DensePoints pts(points, options.normalize);
  return Lloyd<DensePoints>(pts, options).run();
}

KMeansResult kmeans(const SparseMatrix& points, const KMeansOptions& options) {
  const SparsePoints pts(points, options.normalize);
  return Lloyd<SparsePoints>(pts, options).run();
}

ClusterAssignment cluster_queries(const QuerySet& queries,
                                  const Representation& representation,
                                  const KMeansOptions& options) {
  if (queries.empty()) throw Error("cannot cluster an empty query set");
  KMeansOptions opt = options;
  opt.normalize = true;

  std::vector<std::uint32_t> labels;
  if (std::holds_alternative<TfidfRepresentation>(representation)) {
    auto tfidf = tfidf_vectorize(queries);
    const SparseMatrix m(tfidf.vocabulary.size(), std::move(tfidf.vectors));
    labels = kmeans(m, opt).labels;
  } else {
    const auto* emb = std::get<DenseRepresentation>(representation).matrix;
    if (emb == nullptr) throw Error("dense representation has no matrix");
    std::unordered_map<std::string_view, std::size_t> rows;
    for (std::size_t r = 0; r < emb->rows(); ++r) {
      rows.emplace(emb->ids()[r].str(), r);
    }
    std::vector<double> data;
    data.reserve(queries.size() * emb->dim());
    for (const auto& q : queries.queries()) {
      auto it = rows.find(q.id.str());
      if (it == rows.end()) {
        throw Error("embedding matrix has no row for query " + q.id.str());
      }
      const auto row = emb->row(it->second);
      data.insert(data.end(), row.begin(), row.end());
    }
    if (emb->rows() != queries.size()) {
      throw Error("embedding matrix has rows for queries outside the set");
    }
    const DenseMatrix m(queries.size(), emb->dim(), std::move(data));
    labels = kmeans(m, opt).labels;
  }

  std::map<QueryId, std::uint32_t> groups;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    groups.emplace(queries[i].id, labels[i]);
  }
  return ClusterAssignment(opt.k, std::move(groups));
}

std::string describe_clustering(const Representation& representation,
                                const KMeansOptions& options) {
  std::ostringstream out;
  out << "kmeans repr="
      << (std::holds_alternative<TfidfRepresentation>(representation)
              ? "tfidf"
              : "dense")
      << " k=" << options.k << " seed=" << options.seed << " init="
      << (std::holds_alternative<PlusPlusInit>(options.init) ? "plusplus"
                                                             : "explicit")
      << " max_iter=" << options.max_iter << " tol=" << options.tol;
  return out.str();
}

}  // namespace tretr
