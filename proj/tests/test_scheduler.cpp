#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "core/scheduler.hpp"

using namespace core;

namespace {

const CodeParams kAzure(14, 12, 5);

FailureMatrix step_pattern() {
  return FailureMatrix::from_pattern_string("6x14;2,0;3,0;3,1", kAzure);
}

FailureMatrix plus_pattern() {
  return FailureMatrix::from_pattern_string("6x14;1,1;2,0;2,1;2,2;3,1", kAzure);
}

FailureMatrix random_mask(const CodeParams& p, int failures, std::mt19937_64& rng) {
  std::vector<int> pool(p.cells());
  for (int i = 0; i < p.cells(); ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  FailureMatrix fm(p);
  for (int i = 0; i < failures; ++i) fm.mark_failed(pool[i] / p.n, pool[i] % p.n);
  return fm;
}

}  // namespace

TEST_CASE("compute_hv") {
  CHECK(compute_hv(FailureMatrix(kAzure)).v == 0);
  CHECK(compute_hv(FailureMatrix(kAzure)).h == 0);

  const HVState step = compute_hv(step_pattern());
  CHECK(step.v == 0);
  CHECK(step.h == 1);

  const HVState plus = compute_hv(plus_pattern());
  CHECK(plus.v == 1);
  CHECK(plus.h == 2);
}

TEST_CASE("step pattern costs: 24 / 22 / 17") {
  const auto fm = step_pattern();
  const auto rf = schedule_row_first(fm);
  const auto cf = schedule_column_first(fm);
  const auto rgs = schedule_rgs(fm);
  CHECK(rf.total_blocks_read == 24);
  CHECK(cf.total_blocks_read == 22);
  CHECK(rgs.total_blocks_read == 17);

  // row-first schedule is R3, R2
  REQUIRE(rf.actions.size() == 2);
  CHECK(rf.actions[0].kind == RepairAction::Kind::Horizontal);
  CHECK(rf.actions[0].row == 3);
  CHECK(rf.actions[1].row == 2);

  // column-first is C1, R2, C0
  REQUIRE(cf.actions.size() == 3);
  CHECK(cf.actions[0].kind == RepairAction::Kind::Vertical);
  CHECK(cf.actions[0].col == 1);
  CHECK(cf.actions[1].kind == RepairAction::Kind::Horizontal);
  CHECK(cf.actions[1].row == 2);
  CHECK(cf.actions[2].col == 0);

  // rgs is R3 then a vertical
  REQUIRE(rgs.actions.size() == 2);
  CHECK(rgs.actions[0].kind == RepairAction::Kind::Horizontal);
  CHECK(rgs.actions[0].row == 3);
  CHECK(rgs.actions[1].kind == RepairAction::Kind::Vertical);
}

TEST_CASE("plus pattern costs: 41 / 39 / 34") {
  const auto fm = plus_pattern();
  CHECK(schedule_row_first(fm).total_blocks_read == 41);
  CHECK(schedule_column_first(fm).total_blocks_read == 39);
  CHECK(schedule_rgs(fm).total_blocks_read == 34);
}

TEST_CASE("single failure") {
  FailureMatrix fm(kAzure);
  fm.mark_failed(2, 7);

  const auto rf = schedule_row_first(fm);
  REQUIRE(rf.actions.size() == 1);
  CHECK(rf.actions[0].kind == RepairAction::Kind::Horizontal);
  CHECK(rf.total_blocks_read == 12);

  const auto cf = schedule_column_first(fm);
  REQUIRE(cf.actions.size() == 1);
  CHECK(cf.actions[0].kind == RepairAction::Kind::Vertical);
  CHECK(cf.total_blocks_read == 5);

  // c'(1): min(k, t) = min(12, 5) -> vertical
  const auto rgs = schedule_rgs(fm);
  REQUIRE(rgs.actions.size() == 1);
  CHECK(rgs.actions[0].kind == RepairAction::Kind::Vertical);
  CHECK(rgs.total_blocks_read == 5);
  CHECK(rgs.normalized_time == Rational(5, 12));
}

TEST_CASE("schedulers reject irrecoverable patterns") {
  FailureMatrix fm(kAzure);
  for (int c : {0, 1, 2}) {
    fm.mark_failed(1, c);
    fm.mark_failed(4, c);
  }
  CHECK_THROWS_AS(schedule_row_first(fm), UnrecoverableRow);
  CHECK_THROWS_AS(schedule_column_first(fm), UnrecoverableRow);
  CHECK_THROWS_AS(schedule_rgs(fm), UnrecoverableRow);
}

TEST_CASE("schedule cost sums blocks read") {
  RepairSchedule s;
  CHECK(schedule_cost(s) == 0);
  s.actions.push_back({RepairAction::Kind::Vertical, 0, 1, 5});
  s.actions.push_back({RepairAction::Kind::Vertical, 2, 3, 5});
  CHECK(schedule_cost(s) == 10);
}

TEST_CASE("wave time model") {
  SUBCASE("two verticals on disjoint columns run concurrently") {
    FailureMatrix fm(kAzure);
    fm.mark_failed(0, 2);
    fm.mark_failed(3, 9);
    RepairSchedule s;
    s.actions.push_back({RepairAction::Kind::Vertical, 0, 2, 5});
    s.actions.push_back({RepairAction::Kind::Vertical, 3, 9, 5});
    CHECK(schedule_time(s, fm) == Rational(5, 12));
  }

  SUBCASE("horizontal reading a repaired block waits for it") {
    // vertical fixes (1,0); the later horizontal on row 0 reads column 0
    FailureMatrix fm(kAzure);
    fm.mark_failed(1, 0);
    fm.mark_failed(0, 13);
    RepairSchedule s;
    s.actions.push_back({RepairAction::Kind::Vertical, 1, 0, 5});
    s.actions.push_back({RepairAction::Kind::Horizontal, 0, -1, 12});
    // horizontal reads columns 0..11 of row 0, including the shared source
    // column 0 -> forced second wave: 5/12 + 1
    CHECK(schedule_time(s, fm) == Rational(17, 12));
  }
}

TEST_CASE("schedules replay validly and empty the mask") {
  std::mt19937_64 rng(59);
  int checked = 0;
  while (checked < 400) {
    const auto fm = random_mask(kAzure, 1 + static_cast<int>(rng() % 14), rng);
    if (!is_recoverable(fm)) continue;
    ++checked;
    for (auto kind : {SchedulerKind::RowFirst, SchedulerKind::ColumnFirst,
                      SchedulerKind::Rgs}) {
      const auto s = make_schedule(kind, fm);
      CHECK(schedule_valid(s, fm));
      CHECK(s.total_blocks_read == schedule_cost(s));
      CHECK(s.normalized_time.num >= 0);
    }
  }
}

TEST_CASE("determinism: identical masks give identical schedules") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fm = random_mask(kAzure, 1 + static_cast<int>(rng() % 10), rng);
    if (!is_recoverable(fm)) continue;
    for (auto kind : {SchedulerKind::RowFirst, SchedulerKind::ColumnFirst,
                      SchedulerKind::Rgs})
      CHECK(make_schedule(kind, fm).actions == make_schedule(kind, fm).actions);
  }
}

TEST_CASE("schedule text form") {
  const auto rgs = schedule_rgs(step_pattern());
  const std::string text = to_text(rgs);
  CHECK(text.find("H 3\n") != std::string::npos);
  CHECK(text.find("# blocks_read=17 time=") != std::string::npos);
}

TEST_CASE("rational") {
  CHECK(Rational(10, 4) == Rational(5, 2));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(17, 12).str() == "17/12");
  CHECK(Rational(3, 1).str() == "3");
  CHECK(Rational(5, 12).value() == doctest::Approx(5.0 / 12.0));
}
