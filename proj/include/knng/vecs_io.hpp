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

// Vector file formats.
//
//   fvecs  repeated records: int32 d (little-endian), then d float32 values.
//   ivecs  same layout with int32 values; used for neighbor-id files.
//   csv    one vector per line, comma-separated decimals; LF or CRLF.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "knng/common.hpp"
#include "knng/dataset.hpp"
#include "knng/detail/binary_io.hpp"

namespace knng {

enum class VectorFormat { Fvecs, Csv };

/// Format implied by the file extension (.fvecs or .csv).
inline VectorFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".fvecs") return VectorFormat::Fvecs;
  if (ext == ".csv") return VectorFormat::Csv;
  throw InvalidArgument("cannot infer vector format from extension '" + ext + "' of " + path.string());
}

inline VectorDataset parse_fvecs(std::span<const std::uint8_t> bytes, const std::string& context,
                                 std::string name = {}) {
  detail::ByteReader in(bytes, context);
  std::vector<float> values;
  std::int32_t dim = 0;
  while (!in.at_end()) {
    const std::size_t record = in.offset();
    const std::int32_t d = in.i32("dimension header");
    if (d <= 0) in.fail_at(record, "non-positive dimension " + std::to_string(d));
    if (dim == 0) {
      dim = d;
    } else if (d != dim) {
      in.fail_at(record, "record dimension " + std::to_string(d) + " differs from " + std::to_string(dim));
    }
    in.require(static_cast<std::size_t>(d) * 4, "vector payload");
    for (std::int32_t c = 0; c < d; ++c) {
      const std::size_t at = in.offset();
      const float v = in.f32("component");
      if (!std::isfinite(v)) in.fail_at(at, "non-finite component");
      values.push_back(v);
    }
  }
  if (dim == 0) throw FormatError(context + ": no records", 0);
  return VectorDataset(static_cast<std::size_t>(dim), std::move(values), std::move(name));
}

inline std::vector<std::uint8_t> encode_fvecs(const VectorDataset& data) {
  detail::ByteWriter out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.i32(static_cast<std::int32_t>(data.dim()));
    for (float v : data[i]) out.f32(v);
  }
  return out.take();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline VectorDataset parse_csv(std::string_view text, const std::string& context, std::string name = {}) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<float> values;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;

    std::size_t columns = 0;
    for (;;) {
      const auto comma = line.find(',');
      const auto field = detail::trim(line.substr(0, comma));
      ++columns;
      float v = 0.0f;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw FormatError(context + ": unparsable value '" + std::string(field) + "' at line " +
                              std::to_string(line_no) + " column " + std::to_string(columns),
                          line_no);
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (dim == 0) {
      dim = columns;
    } else if (columns != dim) {
      throw FormatError(context + ": line " + std::to_string(line_no) + " has " + std::to_string(columns) +
                            " columns, expected " + std::to_string(dim),
                        line_no);
    }
  }
  if (dim == 0) throw FormatError(context + ": no rows", 0);
  return VectorDataset(dim, std::move(values), std::move(name));
}

inline std::string encode_csv(const VectorDataset& data) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool first = true;
    for (float v : data[i]) {
      if (!first) out.push_back(',');
      first = false;
      // Shortest representation that round-trips to the same float.
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

inline VectorDataset load_vectors(const std::filesystem::path& path, VectorFormat format) {
  const auto bytes = detail::read_file_bytes(path);
  auto name = path.stem().string();
  if (format == VectorFormat::Fvecs) return parse_fvecs(bytes, path.string(), std::move(name));
  return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), path.string(),
                   std::move(name));
}

inline VectorDataset load_vectors(const std::filesystem::path& path) {
  return load_vectors(path, format_from_path(path));
}

inline void write_vectors(const std::filesystem::path& path, const VectorDataset& data, VectorFormat format) {
  if (format == VectorFormat::Fvecs) {
    detail::write_file_bytes(path, encode_fvecs(data));
  } else {
    const auto text = encode_csv(data);
    detail::write_file_bytes(
        path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
}

inline void write_vectors(const std::filesystem::path& path, const VectorDataset& data) {
  write_vectors(path, data, format_from_path(path));
}

/// Rows of int32 values, e.g. neighbor ids per query.
using IntRows = std::vector<std::vector<std::int32_t>>;

inline IntRows parse_ivecs(std::span<const std::uint8_t> bytes, const std::string& context) {
  detail::ByteReader in(bytes, context);
  IntRows rows;
  while (!in.at_end()) {
    const std::size_t record = in.offset();
    const std::int32_t d = in.i32("row length");
    if (d < 0) in.fail_at(record, "negative row length " + std::to_string(d));
    in.require(static_cast<std::size_t>(d) * 4, "row payload");
    auto& row = rows.emplace_back();
    row.reserve(static_cast<std::size_t>(d));
    for (std::int32_t c = 0; c < d; ++c) row.push_back(in.i32("value"));
  }
  return rows;
}

inline std::vector<std::uint8_t> encode_ivecs(const IntRows& rows) {
  detail::ByteWriter out;
  for (const auto& row : rows) {
    out.i32(static_cast<std::int32_t>(row.size()));
    for (auto v : row) out.i32(v);
  }
  return out.take();
}

inline IntRows read_ivecs(const std::filesystem::path& path) {
  return parse_ivecs(detail::read_file_bytes(path), path.string());
}

inline void write_ivecs(const std::filesystem::path& path, const IntRows& rows) {
  detail::write_file_bytes(path, encode_ivecs(rows));
}

}  // namespace knng
