#include "core/scheduler.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace core {

std::string Rational::str() const {
  std::ostringstream out;
  out << num;
  if (den != 1) out << '/' << den;
  return out.str();
}

HVState compute_hv(const FailureMatrix& fm) {
  HVState hv;
  const int m = fm.params().m();
  for (int r = 0; r < fm.params().rows(); ++r)
    hv.v += std::max(0, fm.row_failures(r) - m);
  for (int c = 0; c < fm.params().n; ++c)
    hv.h += std::max(0, fm.col_failures(c) - 1);
  return hv;
}

namespace {

// Mutable mask with per-row/column failure counters used while planning.
struct PlanState {
  FailureMatrix mask;
  std::vector<int> row_fail;
  std::vector<int> col_fail;
  int total = 0;

  explicit PlanState(const FailureMatrix& fm)
      : mask(fm),
        row_fail(fm.params().rows()),
        col_fail(fm.params().n) {
    for (int r = 0; r < fm.params().rows(); ++r) row_fail[r] = fm.row_failures(r);
    for (int c = 0; c < fm.params().n; ++c) col_fail[c] = fm.col_failures(c);
    total = fm.total_failures();
  }

  int rows() const { return mask.params().rows(); }
  int n() const { return mask.params().n; }
  int k() const { return mask.params().k; }
  int t() const { return mask.params().t; }
  int m() const { return mask.params().m(); }

  void clear_cell(int r, int c) {
    mask.mark_repaired(r, c);
    --row_fail[r];
    --col_fail[c];
    --total;
  }

  RepairAction apply_horizontal(int r) {
    for (int c = 0; c < n(); ++c)
      if (mask.failed(r, c)) clear_cell(r, c);
    return RepairAction{RepairAction::Kind::Horizontal, r, -1, k()};
  }

  RepairAction apply_vertical(int c) {
    for (int r = 0; r < rows(); ++r)
      if (mask.failed(r, c)) {
        clear_cell(r, c);
        return RepairAction{RepairAction::Kind::Vertical, r, c, t()};
      }
    throw std::logic_error("apply_vertical: empty column");
  }

  // Repairable row (1..m failures) with the most failures, tie lowest index.
  int best_repairable_row() const {
    int best = -1;
    for (int r = 0; r < rows(); ++r)
      if (row_fail[r] >= 1 && row_fail[r] <= m() &&
          (best < 0 || row_fail[r] > row_fail[best]))
        best = r;
    return best;
  }

  int lowest_single_col() const {
    for (int c = 0; c < n(); ++c)
      if (col_fail[c] == 1) return c;
    return -1;
  }
};

RepairSchedule finish(std::vector<RepairAction> actions, const FailureMatrix& fm) {
  RepairSchedule s;
  s.actions = std::move(actions);
  s.total_blocks_read = schedule_cost(s);
  s.normalized_time = schedule_time(s, fm);
  return s;
}

void require_recoverable(const FailureMatrix& fm) {
  if (!is_recoverable(fm))
    throw UnrecoverableRow("scheduler: failure pattern is not recoverable");
}

}  // namespace

RepairSchedule schedule_row_first(const FailureMatrix& fm) {
  require_recoverable(fm);
  PlanState st(fm);
  std::vector<RepairAction> actions;
  while (st.total > 0) {
    if (const int r = st.best_repairable_row(); r >= 0) {
      actions.push_back(st.apply_horizontal(r));
    } else {
      const int c = st.lowest_single_col();
      if (c < 0) throw std::logic_error("row-first: no applicable repair");
      actions.push_back(st.apply_vertical(c));
    }
  }
  return finish(std::move(actions), fm);
}

RepairSchedule schedule_column_first(const FailureMatrix& fm) {
  require_recoverable(fm);
  PlanState st(fm);
  std::vector<RepairAction> actions;
  while (st.total > 0) {
    if (const int c = st.lowest_single_col(); c >= 0) {
      actions.push_back(st.apply_vertical(c));
    } else {
      const int r = st.best_repairable_row();
      if (r < 0) throw std::logic_error("column-first: no applicable repair");
      actions.push_back(st.apply_horizontal(r));
    }
  }
  return finish(std::move(actions), fm);
}

RepairSchedule schedule_rgs(const FailureMatrix& fm) {
  require_recoverable(fm);
  PlanState st(fm);
  std::vector<RepairAction> actions;

  // Phase 1: clear the critical failures along the c(h,v) recursion.
  while (true) {
    HVState hv = compute_hv(st.mask);
    if (hv.v == 0 && hv.h == 0) break;

    if (hv.v > 0) {
      // Vertical that decreases v: single-failure column whose failed cell
      // sits in a row with more than n-k failures.
      int pick = -1;
      for (int c = 0; c < st.n() && pick < 0; ++c) {
        if (st.col_fail[c] != 1) continue;
        for (int r = 0; r < st.rows(); ++r)
          if (st.mask.failed(r, c) && st.row_fail[r] > st.m()) {
            pick = c;
            break;
          }
      }
      if (pick >= 0) {
        actions.push_back(st.apply_vertical(pick));
        continue;
      }
      // dec(v) not applicable: fall through to the h-decreasing branch.
    }

    // Horizontal that decreases h: repairable row with a failure in some
    // column holding two or more failures; the row with the most failures
    // wins (on the canonical step pattern this picks row 3 over row 2,
    // which is what makes the 17-block schedule), tie lowest index.
    int pick = -1;
    for (int r = 0; r < st.rows(); ++r) {
      if (st.row_fail[r] < 1 || st.row_fail[r] > st.m()) continue;
      bool decreases_h = false;
      for (int c = 0; c < st.n(); ++c)
        if (st.mask.failed(r, c) && st.col_fail[c] >= 2) {
          decreases_h = true;
          break;
        }
      if (decreases_h && (pick < 0 || st.row_fail[r] > st.row_fail[pick]))
        pick = r;
    }
    if (pick >= 0) {
      actions.push_back(st.apply_horizontal(pick));
      continue;
    }

    // Neither a v-decreasing vertical nor an h-decreasing horizontal exists;
    // make progress with any applicable repair (recoverable input guarantees
    // one) and re-evaluate.
    if (const int c = st.lowest_single_col(); c >= 0) {
      actions.push_back(st.apply_vertical(c));
    } else if (const int r = st.best_repairable_row(); r >= 0) {
      actions.push_back(st.apply_horizontal(r));
    } else {
      throw std::logic_error("rgs: no applicable repair");
    }
  }

  // Phase 2: at most one failure per column and at most n-k per row remain;
  // per row pick min(k, r*t), ties to vertical.
  for (int r = 0; r < st.rows(); ++r) {
    const int f = st.row_fail[r];
    if (f == 0) continue;
    if (st.k() < f * st.t()) {
      actions.push_back(st.apply_horizontal(r));
    } else {
      for (int c = 0; c < st.n(); ++c)
        if (st.mask.failed(r, c)) actions.push_back(st.apply_vertical(c));
    }
  }
  return finish(std::move(actions), fm);
}

RepairSchedule make_schedule(SchedulerKind kind, const FailureMatrix& fm) {
  switch (kind) {
    case SchedulerKind::RowFirst: return schedule_row_first(fm);
    case SchedulerKind::ColumnFirst: return schedule_column_first(fm);
    case SchedulerKind::Rgs: return schedule_rgs(fm);
  }
  throw std::invalid_argument("make_schedule: unknown scheduler");
}

long long schedule_cost(const RepairSchedule& schedule) {
  long long total = 0;
  for (const RepairAction& a : schedule.actions) total += a.blocks_read;
  return total;
}

Rational schedule_time(const RepairSchedule& schedule, const FailureMatrix& fm) {
  FailureMatrix mask = fm;
  const int k = fm.params().k;

  std::set<std::pair<int, int>> wave_produced;
  std::set<int> wave_sources;
  long long total_kths = 0;  // in units of 1/k
  int wave_max = 0;

  for (const RepairAction& a : schedule.actions) {
    std::vector<std::pair<int, int>> reads;
    std::vector<int> sources;
    std::vector<std::pair<int, int>> produced;

    if (a.kind == RepairAction::Kind::Vertical) {
      for (int r = 0; r < mask.params().rows(); ++r)
        if (r != a.row) reads.emplace_back(r, a.col);
      sources.push_back(a.col);
      produced.emplace_back(a.row, a.col);
    } else {
      int taken = 0;
      for (int c = 0; c < mask.params().n && taken < k; ++c) {
        if (mask.failed(a.row, c)) {
          produced.emplace_back(a.row, c);
        } else {
          reads.emplace_back(a.row, c);
          sources.push_back(c);
          ++taken;
        }
      }
      for (int c = 0; c < mask.params().n; ++c)
        if (mask.failed(a.row, c) &&
            std::find(produced.begin(), produced.end(), std::pair{a.row, c}) ==
                produced.end())
          produced.emplace_back(a.row, c);
    }

    bool conflict = false;
    for (const auto& cell : reads)
      if (wave_produced.count(cell)) {
        conflict = true;
        break;
      }
    if (!conflict)
      for (int c : sources)
        if (wave_sources.count(c)) {
          conflict = true;
          break;
        }

    if (conflict) {
      total_kths += wave_max;
      wave_produced.clear();
      wave_sources.clear();
      wave_max = 0;
    }
    wave_produced.insert(produced.begin(), produced.end());
    wave_sources.insert(sources.begin(), sources.end());
    wave_max = std::max(wave_max, a.blocks_read);

    for (const auto& [r, c] : produced) mask.mark_repaired(r, c);
  }
  total_kths += wave_max;
  return Rational(total_kths, k);
}

bool schedule_valid(const RepairSchedule& schedule, const FailureMatrix& fm) {
  FailureMatrix mask = fm;
  for (const RepairAction& a : schedule.actions) {
    if (a.kind == RepairAction::Kind::Horizontal) {
      const int f = mask.row_failures(a.row);
      if (f < 1 || f > mask.params().m() || a.blocks_read != mask.params().k)
        return false;
      for (int c = 0; c < mask.params().n; ++c)
        if (mask.failed(a.row, c)) mask.mark_repaired(a.row, c);
    } else {
      if (mask.col_failures(a.col) != 1 || !mask.failed(a.row, a.col) ||
          a.blocks_read != mask.params().t)
        return false;
      mask.mark_repaired(a.row, a.col);
    }
  }
  return mask.empty();
}

std::string to_text(const RepairSchedule& schedule) {
  std::ostringstream out;
  for (const RepairAction& a : schedule.actions) {
    if (a.kind == RepairAction::Kind::Horizontal)
      out << "H " << a.row << '\n';
    else
      out << "V " << a.row << ' ' << a.col << '\n';
  }
  out << "# blocks_read=" << schedule.total_blocks_read
      << " time=" << schedule.normalized_time.str() << '\n';
  return out.str();
}

}  // namespace core
