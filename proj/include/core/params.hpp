#pragma once

#include <stdexcept>
#include <string>

namespace core {

// The (n,k,t) tuple of a CORE product-code group: RS(n,k) rows crossed with
// a (t+1,t) single-parity-check column code over GF(2^q), q fixed at 8.
struct CodeParams {
  int n = 0;  // codeword length in blocks
  int k = 0;  // data blocks per object
  int t = 0;  // objects per cross-object group
  int q = 8;  // symbol width in bits

  CodeParams() = default;
  CodeParams(int n_, int k_, int t_, int q_ = 8) : n(n_), k(k_), t(t_), q(q_) {
    validate();
  }

  int m() const { return n - k; }
  int rows() const { return t + 1; }
  int cells() const { return rows() * n; }
  double stretch() const { return static_cast<double>(n) / k; }

  void validate() const {
    if (q != 8)
      throw std::invalid_argument("CodeParams: only q=8 is supported");
    if (k < 2 || k >= n)
      throw std::invalid_argument("CodeParams: need 2 <= k < n");
    if (t < 1)
      throw std::invalid_argument("CodeParams: need t >= 1");
    if (n > (1 << q))
      throw std::invalid_argument("CodeParams: need n <= 2^q");
    // keeps the recoverability bound U = t*m + (2k-n) meaningful
    if (2 * k < n)
      throw std::invalid_argument("CodeParams: need 2k >= n");
  }

  bool operator==(const CodeParams&) const = default;
};

// Raised when a row (or pattern) cannot be reconstructed.
class UnrecoverableRow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace core
