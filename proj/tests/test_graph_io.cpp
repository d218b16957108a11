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


#include <gtest/gtest.h>

#include <random>

#include "knng/graph_io.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace knng {
namespace {

KnnGraph sample_graph(EdgeStrategy s, std::optional<std::size_t> cap, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  return build_graph(oracle::random_points(rng, 40, 3), 5, s, cap);
}

TEST(GraphFile, RoundTripsEveryStrategy) {
  for (auto s : kAllStrategies) {
    for (auto cap : {std::optional<std::size_t>{}, std::optional<std::size_t>{7}}) {
      const auto g = sample_graph(s, cap);
      const auto back = decode_graph(encode_graph(g), "mem");
      EXPECT_TRUE(back == g);
      EXPECT_EQ(back.params().mod_cap, cap);
    }
  }
}

TEST(GraphFile, HeaderLayout) {
  const KnnGraph g({{1}, {0}}, EdgeStrategy::UndirectedKnn, {1, std::nullopt});
  const auto bytes = encode_graph(g);
  const std::vector<std::uint8_t> expect{'K', 'N', 'N', 'G', 1, 0, 1, 0, 2, 0, 0, 0, 1, 0, 0, 0, 0xFF, 0xFF, 0xFF, 0xFF,
                                         1,   0,   0,   0,   1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(bytes, expect);
}

TEST(GraphFile, RejectsCorruptHeaders) {
  auto bytes = encode_graph(sample_graph(EdgeStrategy::DirectedKnn, std::nullopt));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_graph(bad, "g"), FormatError);
  bad = bytes;
  bad[4] = 2;
  EXPECT_THROW(decode_graph(bad, "g"), FormatError);
  bad = bytes;
  bad[6] = 9;
  EXPECT_THROW(decode_graph(bad, "g"), FormatError);
  bad = bytes;
  bad[11] = 0x7F;  // absurd vertex count
  EXPECT_THROW(decode_graph(bad, "g"), FormatError);
  bad = bytes;
  bad.push_back(0);
  EXPECT_THROW(decode_graph(bad, "g"), FormatError);
}

TEST(GraphFile, RejectsInvalidRecords) {
  // n=2; vertex 0 lists itself.
  const std::vector<std::uint8_t> self{'K', 'N', 'N', 'G', 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 0xFF, 0xFF, 0xFF, 0xFF,
                                       1,   0,   0,   0,   0, 0, 0, 0, 0, 0, 0, 0};
  try {
    decode_graph(self, "g");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 24u);
  }
  // Degree 1 under a cap of 0.
  auto capped = self;
  capped[16] = capped[17] = capped[18] = capped[19] = 0;
  capped[24] = 1;
  EXPECT_THROW(decode_graph(capped, "g"), FormatError);
}

// Property: every strict prefix of a valid file is rejected with FormatError.
TEST(GraphFile, TruncationFuzz) {
  const auto bytes = encode_graph(sample_graph(EdgeStrategy::UndirectedKnn, 8));
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    EXPECT_THROW(decode_graph(std::span(bytes.data(), len), "g"), FormatError) << len;
  }
}

// Property: random byte corruption either decodes to a valid graph or raises
// FormatError; nothing else escapes.
TEST(GraphFile, CorruptionFuzz) {
  const auto bytes = encode_graph(sample_graph(EdgeStrategy::RngPruned, std::nullopt));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 2000; ++t) {
    auto bad = bytes;
    const int flips = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < flips; ++f) bad[rng() % bad.size()] = static_cast<std::uint8_t>(rng());
    try {
      const auto g = decode_graph(bad, "g");
      for (VertexId v = 0; v < g.size(); ++v)
        for (VertexId u : g.neighbors(v)) ASSERT_LT(u, g.size());
    } catch (const FormatError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception: " << e.what();
    }
  }
}

TEST(GraphFile, SaveLoadIsByteStable) {
  testing::TempDir dir;
  const auto g = sample_graph(EdgeStrategy::MrngPruned, 70);
  save_graph(g, dir / "a.knng");
  save_graph(load_graph(dir / "a.knng"), dir / "b.knng");
  EXPECT_EQ(detail::read_file_bytes(dir / "a.knng"), detail::read_file_bytes(dir / "b.knng"));
  EXPECT_THROW(load_graph(dir / "none.knng"), Error);
}

}  // namespace
}  // namespace knng
