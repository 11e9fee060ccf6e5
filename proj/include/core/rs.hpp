#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/gf256.hpp"
#include "core/params.hpp"

namespace core {

using Block = std::vector<std::uint8_t>;

// Systematic generator G = [I_k | H], H a k x m Vandermonde block with
// H[i][j] = alpha_i^j and alpha_i = i+1 (first k nonzero field elements).
class GeneratorMatrix {
 public:
  GeneratorMatrix(int k, int n);

  gf::Elem at(int row, int col) const { return entries_[row * n_ + col]; }
  int rows() const { return k_; }
  int cols() const { return n_; }

 private:
  int k_;
  int n_;
  std::vector<gf::Elem> entries_;
};

GeneratorMatrix build_generator(const CodeParams& params);

// Encodes k data blocks into an n-block codeword. The first k outputs are
// the inputs verbatim; parity j = sum_i alpha_i^j * data_i, bytewise.
std::vector<Block> rs_encode(std::span<const Block> data, const CodeParams& params);

// Decodes the k systematic blocks from any >= k (column, block) pairs.
// Exactly the first k pairs in ascending column order are consumed; extra
// blocks are ignored. Throws UnrecoverableRow if fewer than k are supplied,
// std::invalid_argument on duplicate columns.
std::vector<Block> rs_decode(std::span<const std::pair<int, Block>> available,
                             const CodeParams& params);

}  // namespace core
