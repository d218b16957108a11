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

// Binary graph file, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "KNNG"
//   4       2     version (1)
//   6       2     strategy tag (EdgeStrategy value)
//   8       4     n, vertex count
//   12      4     K, neighbors requested at build time
//   16      4     mod_cap, 0xFFFFFFFF when uncapped
//   20      ...   n records: u32 out-degree, then that many u32 ids, ascending

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "knng/detail/binary_io.hpp"
#include "knng/graph.hpp"

namespace knng {

inline constexpr std::string_view kGraphMagic = "KNNG";
inline constexpr std::uint16_t kGraphVersion = 1;
inline constexpr std::uint32_t kNoCap = 0xFFFFFFFFu;

inline std::vector<std::uint8_t> encode_graph(const KnnGraph& g) {
  detail::ByteWriter out;
  out.raw(kGraphMagic);
  out.u16(kGraphVersion);
  out.u16(static_cast<std::uint16_t>(g.strategy()));
  out.u32(static_cast<std::uint32_t>(g.size()));
  out.u32(static_cast<std::uint32_t>(g.params().K));
  out.u32(g.params().mod_cap ? static_cast<std::uint32_t>(*g.params().mod_cap) : kNoCap);
  for (const auto& list : g.adjacency()) {
    out.u32(static_cast<std::uint32_t>(list.size()));
    for (VertexId id : list) out.u32(id);
  }
  return out.take();
}

inline KnnGraph decode_graph(std::span<const std::uint8_t> bytes, const std::string& context) {
  detail::ByteReader in(bytes, context);
  if (in.raw(4, "magic") != kGraphMagic) in.fail_at(0, "bad magic");
  const std::uint16_t version = in.u16("version");
  if (version != kGraphVersion) in.fail_at(4, "unsupported version " + std::to_string(version));
  const std::uint16_t tag = in.u16("strategy tag");
  if (tag > static_cast<std::uint16_t>(EdgeStrategy::MrngPruned)) in.fail_at(6, "unknown strategy tag");
  const std::uint32_t n = in.u32("vertex count");
  const std::uint32_t K = in.u32("K");
  const std::uint32_t cap = in.u32("mod_cap");

  // Each vertex record needs at least its 4-byte degree; reject absurd n before allocating.
  if (static_cast<std::uint64_t>(n) * 4 > in.remaining()) {
    in.fail_at(8, "vertex count " + std::to_string(n) + " exceeds file size");
  }
  std::vector<std::vector<VertexId>> adjacency(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::size_t record = in.offset();
    const std::uint32_t degree = in.u32("degree");
    if (degree >= n) {
      in.fail_at(record, "degree " + std::to_string(degree) + " of vertex " + std::to_string(v) + " exceeds n-1");
    }
    if (cap != kNoCap && degree > cap) in.fail_at(record, "degree above mod_cap");
    in.require(static_cast<std::size_t>(degree) * 4, "neighbor ids");
    auto& list = adjacency[v];
    list.reserve(degree);
    for (std::uint32_t e = 0; e < degree; ++e) {
      const std::size_t at = in.offset();
      const VertexId id = in.u32("neighbor id");
      if (id >= n || id == v) in.fail_at(at, "invalid neighbor id " + std::to_string(id));
      if (!list.empty() && id <= list.back()) in.fail_at(at, "neighbor ids not strictly ascending");
      list.push_back(id);
    }
  }
  if (!in.at_end()) in.fail("trailing bytes after last vertex record");

  BuildParams params{K, cap == kNoCap ? std::nullopt : std::optional<std::size_t>(cap)};
  return KnnGraph(std::move(adjacency), static_cast<EdgeStrategy>(tag), params);
}

inline void save_graph(const KnnGraph& g, const std::filesystem::path& path) {
  detail::write_file_bytes(path, encode_graph(g));
}

inline KnnGraph load_graph(const std::filesystem::path& path) {
  return decode_graph(detail::read_file_bytes(path), path.string());
}

}  // namespace knng
