// Copyright 2026 The knng Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "knng/common.hpp"
#include "knng/parallel.hpp"

namespace knng {

/// Dense float vectors of a fixed dimension, addressed by VertexId 0..n-1.
/// Immutable after construction.
class VectorDataset {
 public:
  VectorDataset() = default;

  /// `values` is row-major, n * dim floats. Throws InvalidArgument on an empty
  /// set, a ragged buffer or a non-finite component.
  VectorDataset(std::size_t dim, std::vector<float> values, std::string name = {})
      : dim_(dim), values_(std::move(values)), name_(std::move(name)) {
    if (dim_ == 0) throw InvalidArgument("dataset dimension must be positive");
    if (values_.empty()) throw InvalidArgument("dataset must contain at least one vector");
    if (values_.size() % dim_ != 0) {
      throw InvalidArgument("dataset buffer of " + std::to_string(values_.size()) +
                            " floats is not a multiple of dim " + std::to_string(dim_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw InvalidArgument("non-finite component " + std::to_string(i % dim_) + " in vector " +
                              std::to_string(i / dim_));
      }
    }
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return values_.empty(); }
  const std::string& name() const noexcept { return name_; }

  std::span<const float> operator[](std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const float> values() const noexcept { return values_; }

  /// Rows [first, first + count) as a new dataset.
  VectorDataset slice(std::size_t first, std::size_t count, std::string name = {}) const {
    if (first + count > size()) throw InvalidArgument("slice out of range");
    std::vector<float> out(values_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                           values_.begin() + static_cast<std::ptrdiff_t>((first + count) * dim_));
    return VectorDataset(dim_, std::move(out), std::move(name));
  }

  /// Rows listed in `rows`, in that order.
  VectorDataset gather(std::span<const VertexId> rows, std::string name = {}) const {
    std::vector<float> out;
    out.reserve(rows.size() * dim_);
    for (VertexId r : rows) {
      if (r >= size()) throw InvalidArgument("gather row out of range");
      auto v = (*this)[r];
      out.insert(out.end(), v.begin(), v.end());
    }
    return VectorDataset(dim_, std::move(out), std::move(name));
  }

  friend bool operator==(const VectorDataset& a, const VectorDataset& b) {
    if (a.dim_ != b.dim_ || a.values_.size() != b.values_.size()) return false;
    // Bitwise comparison: -0.0f and 0.0f differ, as they do on disk.
    return std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(),
                      [](float x, float y) { return std::bit_cast<std::uint32_t>(x) ==
                                                    std::bit_cast<std::uint32_t>(y); });
  }

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::string name_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent stream seed for item `index` under a user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

// Squared L2 with one double accumulator, components visited in order. Every
// distance in the library must reproduce exactly these bits.
inline double squared_l2(const float* a, const float* b, std::size_t dim) noexcept {
  double acc = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double diff = static_cast<double>(a[c]) - static_cast<double>(b[c]);
    acc += diff * diff;
  }
  return acc;
}

inline void check_finite(std::span<const float> v, const char* what) {
  for (float x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " has a non-finite component");
  }
}

/// Bounded max-heap keeping the `capacity` smallest neighbors offered.
class TopK {
 public:
  explicit TopK(std::size_t capacity) : capacity_(capacity) { heap_.reserve(capacity + 1); }

  bool full() const noexcept { return heap_.size() >= capacity_; }
  std::size_t size() const noexcept { return heap_.size(); }
  const Neighbor& worst() const noexcept { return heap_.front(); }

  void offer(const Neighbor& nb) {
    if (heap_.size() < capacity_) {
      heap_.push_back(nb);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (capacity_ > 0 && nb < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = nb;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  NeighborList take_sorted() {
    std::sort_heap(heap_.begin(), heap_.end());
    return std::move(heap_);
  }

 private:
  std::size_t capacity_;
  std::vector<Neighbor> heap_;
};

/// The dataset re-laid out in column-major tiles of kWidth vectors, so that the
/// distances from one query to kWidth vectors are computed lane-parallel. Each
/// lane performs the same operation sequence as squared_l2, so results are
/// bit-identical to it.
class TiledVectors {
 public:
  static constexpr std::size_t kWidth = 8;

  explicit TiledVectors(const VectorDataset& data)
      : n_(data.size()), dim_(data.dim()), tiles_((n_ + kWidth - 1) / kWidth) {
    values_.assign(tiles_ * dim_ * kWidth, 0.0f);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto v = data[i];
      float* base = values_.data() + (i / kWidth) * dim_ * kWidth + (i % kWidth);
      for (std::size_t c = 0; c < dim_; ++c) base[c * kWidth] = v[c];
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t tile_count() const noexcept { return tiles_; }

  void tile_distances(const float* query, std::size_t tile, double* out) const noexcept {
    double acc[kWidth] = {};
    const float* base = values_.data() + tile * dim_ * kWidth;
    for (std::size_t c = 0; c < dim_; ++c) {
      const double qc = static_cast<double>(query[c]);
      const float* col = base + c * kWidth;
      for (std::size_t l = 0; l < kWidth; ++l) {
        const double diff = qc - static_cast<double>(col[l]);
        acc[l] += diff * diff;
      }
    }
    std::copy(acc, acc + kWidth, out);
  }

  /// k nearest vectors to `query`, skipping `exclude` (pass kInvalidVertex for none).
  NeighborList nearest(const float* query, std::size_t k, VertexId exclude) const {
    TopK top(k);
    double dist[kWidth];
    for (std::size_t t = 0; t < tiles_; ++t) {
      tile_distances(query, t, dist);
      const std::size_t first = t * kWidth;
      const std::size_t lanes = std::min(kWidth, n_ - first);
      for (std::size_t l = 0; l < lanes; ++l) {
        const auto id = static_cast<VertexId>(first + l);
        if (id == exclude) continue;
        top.offer({id, dist[l]});
      }
    }
    return top.take_sorted();
  }

 private:
  std::size_t n_;
  std::size_t dim_;
  std::size_t tiles_;
  std::vector<float> values_;
};

}  // namespace detail

/// Squared Euclidean distance, accumulated in double precision.
inline double distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  detail::check_finite(a, "left operand");
  detail::check_finite(b, "right operand");
  return detail::squared_l2(a.data(), b.data(), a.size());
}

/// Exact k nearest dataset points to an arbitrary query vector.
inline NeighborList brute_force_knn(const VectorDataset& data, std::span<const float> query,
                                    std::size_t k) {
  if (query.size() != data.dim()) {
    throw InvalidArgument("query has dim " + std::to_string(query.size()) + ", dataset has " +
                          std::to_string(data.dim()));
  }
  detail::check_finite(query, "query");
  if (k == 0 || k > data.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " outside [1, " + std::to_string(data.size()) +
                          "]");
  }
  detail::TopK top(k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    top.offer({static_cast<VertexId>(i), detail::squared_l2(query.data(), data[i].data(), data.dim())});
  }
  return top.take_sorted();
}

/// Exact k nearest neighbors of dataset member `self`, excluding itself.
inline NeighborList brute_force_knn(const VectorDataset& data, VertexId self, std::size_t k) {
  if (self >= data.size()) throw InvalidArgument("vertex " + std::to_string(self) + " out of range");
  if (k == 0 || k + 1 > data.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(data.size() - 1) + "] for an in-dataset query");
  }
  const auto q = data[self];
  detail::TopK top(k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i == self) continue;
    top.offer({static_cast<VertexId>(i), detail::squared_l2(q.data(), data[i].data(), data.dim())});
  }
  return top.take_sorted();
}

/// Exact K-nearest-neighbor lists of every dataset member (self excluded).
/// Entry v holds v's K nearest neighbors sorted by (distance, id).
using KnnTable = std::vector<NeighborList>;

inline KnnTable compute_knn_table(const VectorDataset& data, std::size_t K, std::size_t threads = 0) {
  if (K == 0 || K + 1 > data.size()) {
    throw InvalidArgument("K=" + std::to_string(K) + " outside [1, " + std::to_string(data.size() - 1) +
                          "]");
  }
  const detail::TiledVectors tiled(data);
  KnnTable table(data.size());
  parallel_for(data.size(), threads, [&](std::size_t v) {
    table[v] = tiled.nearest(data[v].data(), K, static_cast<VertexId>(v));
  });
  return table;
}

/// Exact k nearest dataset points for every row of `queries` (out-of-sample).
inline std::vector<NeighborList> brute_force_knn_batch(const VectorDataset& data,
                                                       const VectorDataset& queries, std::size_t k,
                                                       std::size_t threads = 0) {
  if (queries.empty()) return {};
  if (queries.dim() != data.dim()) throw InvalidArgument("query/dataset dimension mismatch");
  if (k == 0 || k > data.size()) throw InvalidArgument("k out of range");
  const detail::TiledVectors tiled(data);
  std::vector<NeighborList> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    out[i] = tiled.nearest(queries[i].data(), k, kInvalidVertex);
  });
  return out;
}

enum class SyntheticKind { Uniform, GaussianClusters };

struct SyntheticParams {
  std::size_t clusters = 1;  ///< gaussian_clusters only
  double sigma = 0.1;        ///< per-component standard deviation, gaussian_clusters only
};

namespace detail {

// 24 random bits scaled to [0, 1); exactly representable, never rounds up to 1.
inline float unit_float(std::mt19937_64& rng) {
  return static_cast<float>(rng() >> 40) * 0x1.0p-24f;
}

}  // namespace detail

/// Deterministic synthetic data. Uniform draws every component from [0, 1) (the
/// unit cube, not a sphere). GaussianClusters draws `clusters` centers in the unit
/// cube, then each point from an isotropic Gaussian around a uniformly chosen center.
inline VectorDataset generate_synthetic(SyntheticKind kind, std::size_t n, std::size_t dim,
                                        const SyntheticParams& params, std::uint64_t seed) {
  if (n == 0 || dim == 0) throw InvalidArgument("synthetic dataset needs n >= 1 and dim >= 1");
  std::mt19937_64 rng(detail::splitmix64(seed));
  std::vector<float> values(n * dim);

  if (kind == SyntheticKind::Uniform) {
    for (auto& x : values) x = detail::unit_float(rng);
    return VectorDataset(dim, std::move(values), "uniform");
  }

  if (params.clusters == 0) throw InvalidArgument("gaussian_clusters needs at least one cluster");
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
    throw InvalidArgument("gaussian_clusters needs a finite spread sigma > 0");
  }
  std::vector<float> centers(params.clusters * dim);
  for (auto& x : centers) x = detail::unit_float(rng);
  std::uniform_int_distribution<std::size_t> pick(0, params.clusters - 1);
  std::normal_distribution<double> gauss(0.0, params.sigma);
  for (std::size_t i = 0; i < n; ++i) {
    const float* center = centers.data() + pick(rng) * dim;
    for (std::size_t c = 0; c < dim; ++c) {
      values[i * dim + c] = static_cast<float>(static_cast<double>(center[c]) + gauss(rng));
    }
  }
  return VectorDataset(dim, std::move(values), "gaussian_clusters");
}

}  // namespace knng
