#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/params.hpp"

namespace core {

// (t+1) x n availability mask over a CORE group; true = block inaccessible.
class FailureMatrix {
 public:
  explicit FailureMatrix(const CodeParams& params)
      : params_(params), failed_(params.cells(), 0) {}

  const CodeParams& params() const { return params_; }

  bool failed(int row, int col) const { return failed_[index(row, col)] != 0; }
  void mark_failed(int row, int col) { failed_[index(row, col)] = 1; }
  void mark_repaired(int row, int col) { failed_[index(row, col)] = 0; }

  int row_failures(int row) const;
  int col_failures(int col) const;
  int total_failures() const;
  bool empty() const { return total_failures() == 0; }

  // Failed cells in row-major order.
  std::vector<std::pair<int, int>> failed_cells() const;

  // One-line text form: "6x14;2,0;3,0;3,1" (dimensions, then row,col pairs).
  std::string to_pattern_string() const;
  static FailureMatrix from_pattern_string(const std::string& text,
                                           const CodeParams& params);

  bool operator==(const FailureMatrix&) const = default;

 private:
  int index(int row, int col) const {
    if (row < 0 || row >= params_.rows() || col < 0 || col >= params_.n)
      throw std::out_of_range("FailureMatrix: cell out of range");
    return row * params_.n + col;
  }

  CodeParams params_;
  std::vector<std::uint8_t> failed_;
};

// Maximal group of failed cells connected through shared rows/columns.
struct Cluster {
  std::vector<std::pair<int, int>> cells;
  std::set<int> rows;
  std::set<int> cols;
};

// Coarsest partition of the failed cells such that no two clusters share a
// row or column containing failures. Union-find over the failed cells.
std::vector<Cluster> find_clusters(const FailureMatrix& fm);

// Failure-count thresholds: patterns with fewer than L failures are always
// recoverable; patterns with more than U never are.
struct RepairBounds {
  int irrecoverable_lower;  // L = 2(n-k+1)
  int recoverable_upper;    // U = t(n-k) + (2k-n)
};

RepairBounds bounds(const CodeParams& params);

struct RecoverabilityResult {
  bool recoverable;
  FailureMatrix residual;  // empty iff recoverable
};

// Fixpoint of: clear every column with at most one failure, clear every row
// with at most n-k failures; recoverable iff the fixpoint is empty.
RecoverabilityResult check_recoverable(const FailureMatrix& fm);

inline bool is_recoverable(const FailureMatrix& fm) {
  return check_recoverable(fm).recoverable;
}

}  // namespace core
