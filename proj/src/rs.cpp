#include "core/rs.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace core {
namespace {

// Inverts a dense k x k matrix over GF(2^8) by Gauss-Jordan elimination.
// Throws UnrecoverableRow on a singular matrix.
std::vector<gf::Elem> invert(std::vector<gf::Elem> a, int k) {
  std::vector<gf::Elem> inv(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) inv[i * k + i] = 1;

  for (int col = 0; col < k; ++col) {
    int pivot = -1;
    for (int r = col; r < k; ++r) {
      if (a[r * k + col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw UnrecoverableRow("rs_decode: singular column set");
    if (pivot != col) {
      for (int c = 0; c < k; ++c) {
        std::swap(a[pivot * k + c], a[col * k + c]);
        std::swap(inv[pivot * k + c], inv[col * k + c]);
      }
    }
    const gf::Elem pinv = gf::inv(a[col * k + col]);
    for (int c = 0; c < k; ++c) {
      a[col * k + c] = gf::mul(a[col * k + c], pinv);
      inv[col * k + c] = gf::mul(inv[col * k + c], pinv);
    }
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const gf::Elem f = a[r * k + col];
      if (f == 0) continue;
      for (int c = 0; c < k; ++c) {
        a[r * k + c] ^= gf::mul(f, a[col * k + c]);
        inv[r * k + c] ^= gf::mul(f, inv[col * k + c]);
      }
    }
  }
  return inv;
}

}  // namespace

GeneratorMatrix::GeneratorMatrix(int k, int n)
    : k_(k), n_(n), entries_(static_cast<std::size_t>(k) * n, 0) {
  const int m = n - k;
  for (int i = 0; i < k; ++i) {
    entries_[i * n_ + i] = 1;
    const auto alpha = static_cast<gf::Elem>(i + 1);
    for (int j = 0; j < m; ++j)
      entries_[i * n_ + k + j] = gf::pow(alpha, static_cast<unsigned>(j));
  }
}

GeneratorMatrix build_generator(const CodeParams& params) {
  params.validate();
  return GeneratorMatrix(params.k, params.n);
}

std::vector<Block> rs_encode(std::span<const Block> data, const CodeParams& params) {
  if (static_cast<int>(data.size()) != params.k)
    throw std::invalid_argument("rs_encode: expected exactly k blocks");
  const std::size_t len = data.empty() ? 0 : data[0].size();
  for (const Block& b : data)
    if (b.size() != len)
      throw std::invalid_argument("rs_encode: blocks must have equal length");

  const GeneratorMatrix g = build_generator(params);
  std::vector<Block> out(params.n);
  for (int i = 0; i < params.k; ++i) out[i] = data[i];
  for (int j = 0; j < params.m(); ++j) {
    Block parity(len, 0);
    for (int i = 0; i < params.k; ++i)
      gf::mul_add(parity.data(), data[i].data(), len, g.at(i, params.k + j));
    out[params.k + j] = std::move(parity);
  }
  return out;
}

std::vector<Block> rs_decode(std::span<const std::pair<int, Block>> available,
                             const CodeParams& params) {
  if (static_cast<int>(available.size()) < params.k)
    throw UnrecoverableRow("rs_decode: fewer than k blocks available");

  std::vector<int> order(available.size());
  for (std::size_t i = 0; i < available.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return available[a].first < available[b].first;
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (available[order[i]].first == available[order[i - 1]].first)
      throw std::invalid_argument("rs_decode: duplicate column index");
  for (int idx : order) {
    const int col = available[idx].first;
    if (col < 0 || col >= params.n)
      throw std::invalid_argument("rs_decode: column index out of range");
  }
  order.resize(params.k);  // Opt1: consume exactly k blocks

  // All-systematic fast path: nothing to solve.
  bool systematic = true;
  for (int i = 0; i < params.k; ++i)
    if (available[order[i]].first != i) {
      systematic = false;
      break;
    }
  if (systematic) {
    std::vector<Block> out(params.k);
    for (int i = 0; i < params.k; ++i) out[i] = available[order[i]].second;
    return out;
  }

  const std::size_t len = available[order[0]].second.size();
  for (int i = 0; i < params.k; ++i)
    if (available[order[i]].second.size() != len)
      throw std::invalid_argument("rs_decode: blocks must have equal length");

  // y_r = sum_i o_i * G[i][col_r]  =>  o = A^-1 y, bytewise.
  const GeneratorMatrix g = build_generator(params);
  const int k = params.k;
  std::vector<gf::Elem> a(static_cast<std::size_t>(k) * k);
  for (int r = 0; r < k; ++r)
    for (int i = 0; i < k; ++i)
      a[r * k + i] = g.at(i, available[order[r]].first);
  const std::vector<gf::Elem> ainv = invert(std::move(a), k);

  std::vector<Block> out(k, Block(len, 0));
  for (int i = 0; i < k; ++i)
    for (int r = 0; r < k; ++r)
      gf::mul_add(out[i].data(), available[order[r]].second.data(), len,
                  ainv[i * k + r]);
  return out;
}

}  // namespace core
