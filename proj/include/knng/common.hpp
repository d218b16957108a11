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

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace knng {

/// Dense vertex identifier, 0..n-1.
using VertexId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on an argument (out-of-range k, dimension mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents. `offset()` is a byte offset for binary formats
/// and a 1-based line number for text formats.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// A vertex together with its squared Euclidean distance to some reference point.
/// Ordered lexicographically by (distance, id); every queue and neighbor list in
/// the library uses this order.
struct Neighbor {
  VertexId id = kInvalidVertex;
  double distance = 0.0;

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return std::tie(a.distance, a.id) < std::tie(b.distance, b.id);
  }
  friend bool operator>(const Neighbor& a, const Neighbor& b) noexcept { return b < a; }
  friend bool operator==(const Neighbor& a, const Neighbor& b) noexcept = default;
};

/// Sorted ascending by (distance, id), no duplicate ids.
using NeighborList = std::vector<Neighbor>;

inline std::vector<VertexId> ids_of(const NeighborList& list) {
  std::vector<VertexId> ids;
  ids.reserve(list.size());
  for (const auto& nb : list) ids.push_back(nb.id);
  return ids;
}

}  // namespace knng
