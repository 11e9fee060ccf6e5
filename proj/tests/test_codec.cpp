#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>

#include "core/gf256.hpp"
#include "core/grid.hpp"
#include "core/rs.hpp"

using namespace core;

namespace {

// Independent oracle: carryless (polynomial) multiply, then bitwise long
// division by 0x11d. No tables involved.
std::uint8_t gf_mul_oracle(std::uint8_t a, std::uint8_t b) {
  unsigned prod = 0;
  for (int i = 0; i < 8; ++i)
    if (b & (1u << i)) prod ^= static_cast<unsigned>(a) << i;
  for (int bit = 15; bit >= 8; --bit)
    if (prod & (1u << bit)) prod ^= gf::kReductionPoly << (bit - 8);
  return static_cast<std::uint8_t>(prod);
}

std::vector<Block> random_object(int k, std::size_t len, std::mt19937_64& rng) {
  std::vector<Block> blocks(k, Block(len));
  for (Block& b : blocks)
    for (auto& byte : b) byte = static_cast<std::uint8_t>(rng());
  return blocks;
}

}  // namespace

TEST_CASE("gf256 multiplication matches the carryless oracle") {
  CHECK(gf::mul(0, 77) == 0);
  CHECK(gf::mul(1, 77) == 77);
  CHECK(gf::mul(2, 128) == 29);  // x^8 reduced by 0x11d
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      REQUIRE(gf::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) ==
              gf_mul_oracle(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
}

TEST_CASE("gf256 inverse") {
  CHECK(gf::inv(1) == 1);
  CHECK_THROWS_AS(gf::inv(0), std::domain_error);
  // exhaustive-search oracle for inv(2)
  std::uint8_t expected = 0;
  for (int x = 1; x < 256; ++x)
    if (gf_mul_oracle(2, static_cast<std::uint8_t>(x)) == 1)
      expected = static_cast<std::uint8_t>(x);
  CHECK(gf::inv(2) == expected);
  for (int a = 1; a < 256; ++a) {
    const auto e = static_cast<std::uint8_t>(a);
    CHECK(gf::mul(e, gf::inv(e)) == 1);
    CHECK(gf::inv(gf::inv(e)) == e);
  }
}

TEST_CASE("generator matrix shape") {
  const CodeParams params(9, 6, 3);
  const GeneratorMatrix g = build_generator(params);
  for (int i = 0; i < params.k; ++i)
    for (int j = 0; j < params.k; ++j)
      CHECK(g.at(i, j) == (i == j ? 1 : 0));
  for (int i = 0; i < params.k; ++i) CHECK(g.at(i, params.k) == 1);  // alpha^0
  for (int i = 0; i < params.k; ++i)
    for (int j = 0; j < params.m(); ++j)
      CHECK(g.at(i, params.k + j) ==
            gf::pow(static_cast<gf::Elem>(i + 1), static_cast<unsigned>(j)));
}

TEST_CASE("rs parity block 0 is the XOR of the data blocks") {
  const CodeParams params(9, 6, 3);
  std::mt19937_64 rng(7);
  const auto data = random_object(params.k, 64, rng);
  const auto codeword = rs_encode(data, params);
  Block expected(64, 0);
  for (const Block& b : data)
    for (std::size_t i = 0; i < b.size(); ++i) expected[i] ^= b[i];
  CHECK(codeword[params.k] == expected);
}

TEST_CASE("rs encode of all-zero data is all zero") {
  const CodeParams params(9, 6, 3);
  const std::vector<Block> data(6, Block(16, 0));
  for (const Block& b : rs_encode(data, params)) CHECK(b == Block(16, 0));
}

TEST_CASE("rs decode roundtrip from a punctured codeword") {
  const CodeParams params(9, 6, 3);
  std::mt19937_64 rng(11);
  const auto data = random_object(params.k, 128, rng);
  const auto codeword = rs_encode(data, params);
  std::vector<std::pair<int, Block>> available;
  for (int c : {0, 2, 4, 6, 7, 8}) available.emplace_back(c, codeword[c]);
  CHECK(rs_decode(available, params) == data);
}

TEST_CASE("rs decode consumes exactly the first k blocks (Opt1)") {
  const CodeParams params(9, 6, 3);
  std::mt19937_64 rng(13);
  const auto data = random_object(params.k, 32, rng);
  const auto codeword = rs_encode(data, params);
  std::vector<std::pair<int, Block>> available;
  for (int c = 0; c < 6; ++c) available.emplace_back(c, codeword[c]);
  // blocks beyond the first k are garbage; the output must not change
  available.emplace_back(7, Block(32, 0xAB));
  available.emplace_back(8, Block(32, 0xCD));
  CHECK(rs_decode(available, params) == data);
}

TEST_CASE("rs decode error paths") {
  const CodeParams params(9, 6, 3);
  std::vector<std::pair<int, Block>> available;
  for (int c = 0; c < 5; ++c) available.emplace_back(c, Block(8, 0));
  CHECK_THROWS_AS(rs_decode(available, params), UnrecoverableRow);
  available.emplace_back(4, Block(8, 0));  // duplicate column
  CHECK_THROWS_AS(rs_decode(available, params), std::invalid_argument);
}

TEST_CASE("spc encode and vertical repair") {
  const CodeParams params(9, 6, 3);
  std::mt19937_64 rng(17);

  SUBCASE("t=1 parity equals the single row") {
    const CodeParams p1(9, 6, 1);
    std::vector<std::vector<Block>> rows{rs_encode(random_object(6, 16, rng), p1)};
    CHECK(spc_encode(rows) == rows[0]);
  }

  SUBCASE("identical rows cancel") {
    auto row = rs_encode(random_object(6, 16, rng), CodeParams(9, 6, 2));
    std::vector<std::vector<Block>> rows{row, row};
    for (const Block& b : spc_encode(rows)) CHECK(b == Block(16, 0));
  }

  SUBCASE("vertical repair restores a missing cell with t reads") {
    std::vector<std::vector<Block>> objects;
    for (int i = 0; i < 3; ++i) objects.push_back(random_object(6, 16, rng));
    const BlockGrid grid = core_encode(objects, params);
    for (int col = 0; col < params.n; ++col) {
      const int missing = col % params.rows();
      std::vector<Block> column;
      for (int r = 0; r < params.rows(); ++r)
        if (r != missing) column.push_back(grid.at(r, col));
      CHECK(column.size() == static_cast<std::size_t>(params.t));
      CHECK(vertical_repair(column, params) == grid.at(missing, col));
    }
  }

  SUBCASE("wrong block count is rejected") {
    std::vector<Block> two(2, Block(8, 0));
    CHECK_THROWS_AS(vertical_repair(two, params), std::invalid_argument);
  }
}

TEST_CASE("core encode satisfies the product-code commuting square") {
  const CodeParams params(9, 6, 3);
  std::mt19937_64 rng(23);
  std::vector<std::vector<Block>> objects;
  for (int i = 0; i < params.t; ++i) objects.push_back(random_object(6, 64, rng));
  const BlockGrid grid = core_encode(objects, params);

  // parity row = rs_encode(XOR of the data objects)
  std::vector<Block> xored(params.k, Block(64, 0));
  for (const auto& object : objects)
    for (int b = 0; b < params.k; ++b)
      for (std::size_t i = 0; i < 64; ++i) xored[b][i] ^= object[b][i];
  CHECK(grid.rows[params.t] == rs_encode(xored, params));

  // every data row is its own RS codeword
  for (int r = 0; r < params.t; ++r) CHECK(grid.rows[r] == rs_encode(objects[r], params));

  // determinism
  CHECK(core_encode(objects, params).rows == grid.rows);
}

TEST_CASE("core encode with t=1 duplicates the codeword as parity") {
  const CodeParams params(9, 6, 1);
  std::mt19937_64 rng(29);
  std::vector<std::vector<Block>> objects{random_object(6, 16, rng)};
  const BlockGrid grid = core_encode(objects, params);
  CHECK(grid.rows[0] == grid.rows[1]);
}

TEST_CASE("code params validation") {
  CHECK_THROWS_AS(CodeParams(9, 1, 3), std::invalid_argument);   // k too small
  CHECK_THROWS_AS(CodeParams(9, 9, 3), std::invalid_argument);   // k >= n
  CHECK_THROWS_AS(CodeParams(9, 6, 0), std::invalid_argument);   // t < 1
  CHECK_THROWS_AS(CodeParams(9, 4, 3), std::invalid_argument);   // 2k < n
  CHECK_THROWS_AS(CodeParams(9, 6, 3, 4), std::invalid_argument);  // q != 8
  CHECK(CodeParams(14, 12, 5).m() == 2);
}
