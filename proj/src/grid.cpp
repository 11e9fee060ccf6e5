#include "core/grid.hpp"

#include <stdexcept>

namespace core {

std::vector<Block> spc_encode(std::span<const std::vector<Block>> rows) {
  if (rows.empty()) throw std::invalid_argument("spc_encode: no rows");
  const std::size_t n = rows[0].size();
  const std::size_t len = n ? rows[0][0].size() : 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("spc_encode: ragged rows");
    for (const Block& b : row)
      if (b.size() != len)
        throw std::invalid_argument("spc_encode: blocks must have equal length");
  }
  std::vector<Block> parity(n, Block(len, 0));
  for (const auto& row : rows)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < len; ++i) parity[c][i] ^= row[c][i];
  return parity;
}

Block vertical_repair(std::span<const Block> column_blocks, const CodeParams& params) {
  if (static_cast<int>(column_blocks.size()) != params.t)
    throw std::invalid_argument("vertical_repair: expected exactly t blocks");
  const std::size_t len = column_blocks[0].size();
  Block out(len, 0);
  for (const Block& b : column_blocks) {
    if (b.size() != len)
      throw std::invalid_argument("vertical_repair: blocks must have equal length");
    for (std::size_t i = 0; i < len; ++i) out[i] ^= b[i];
  }
  return out;
}

BlockGrid core_encode(std::span<const std::vector<Block>> objects,
                      const CodeParams& params) {
  if (static_cast<int>(objects.size()) != params.t)
    throw std::invalid_argument("core_encode: expected exactly t objects");
  BlockGrid grid{params, {}};
  grid.rows.reserve(params.rows());
  for (const auto& object : objects)
    grid.rows.push_back(rs_encode(object, params));
  grid.rows.push_back(
      spc_encode(std::span<const std::vector<Block>>(grid.rows.data(), params.t)));
  return grid;
}

}  // namespace core
