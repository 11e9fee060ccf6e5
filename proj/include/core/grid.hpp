#pragma once

#include <span>
#include <vector>

#include "core/params.hpp"
#include "core/rs.hpp"

namespace core {

// The (t+1) x n block grid of one CORE group: rows 0..t-1 are RS codewords
// of the t objects, row t is the columnwise XOR parity row (itself a valid
// RS codeword by linearity).
struct BlockGrid {
  CodeParams params;
  std::vector<std::vector<Block>> rows;  // (t+1) rows of n blocks

  const Block& at(int row, int col) const { return rows[row][col]; }
  Block& at(int row, int col) { return rows[row][col]; }
};

// Columnwise XOR of t equal-shape rows.
std::vector<Block> spc_encode(std::span<const std::vector<Block>> rows);

// Restores the missing block of one column as the XOR of the t supplied.
Block vertical_repair(std::span<const Block> column_blocks, const CodeParams& params);

// Full product-code encode: RS per object, then SPC down the columns.
BlockGrid core_encode(std::span<const std::vector<Block>> objects,
                      const CodeParams& params);

}  // namespace core
