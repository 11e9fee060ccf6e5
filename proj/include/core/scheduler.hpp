#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "core/failure_matrix.hpp"

namespace core {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

struct RepairAction {
  enum class Kind { Horizontal, Vertical };
  Kind kind;
  int row;
  int col;          // -1 for Horizontal
  int blocks_read;  // Horizontal -> k, Vertical -> t

  bool operator==(const RepairAction&) const = default;
};

struct RepairSchedule {
  std::vector<RepairAction> actions;
  long long total_blocks_read = 0;
  Rational normalized_time;
};

// v = sum over rows of max(0, failures - (n-k));
// h = sum over cols of max(0, failures - 1).
struct HVState {
  int v = 0;
  int h = 0;
};

HVState compute_hv(const FailureMatrix& fm);

enum class SchedulerKind { RowFirst, ColumnFirst, Rgs };

RepairSchedule schedule_row_first(const FailureMatrix& fm);
RepairSchedule schedule_column_first(const FailureMatrix& fm);
RepairSchedule schedule_rgs(const FailureMatrix& fm);
RepairSchedule make_schedule(SchedulerKind kind, const FailureMatrix& fm);

long long schedule_cost(const RepairSchedule& schedule);

// Normalized repair time under the greedy wave model: each action lasts
// blocks_read/k units; actions are grouped in schedule order into waves; an
// action starts a new wave if it reads a block produced earlier in the wave
// or shares a source column with a wave member; the total is the sum over
// waves of the longest member.
Rational schedule_time(const RepairSchedule& schedule, const FailureMatrix& fm);

// Replays the schedule, checking per-action preconditions; true iff every
// precondition holds and the mask ends empty.
bool schedule_valid(const RepairSchedule& schedule, const FailureMatrix& fm);

// One action per line ("H <row>" / "V <row> <col>") plus a summary comment.
std::string to_text(const RepairSchedule& schedule);

}  // namespace core
