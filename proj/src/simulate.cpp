#include "core/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "core/analytics.hpp"
#include "core/scheduler.hpp"

namespace core {
namespace {

// splitmix64; deterministic and cheap, good enough for these experiments
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int bound) { return static_cast<int>(next() % static_cast<unsigned>(bound)); }
  bool bernoulli(double p) { return uniform() < p; }
};

std::uint64_t sub_seed(std::uint64_t seed, int shard) {
  Rng rng(seed ^ 0x5851f42d4c957f2dULL);
  std::uint64_t s = 0;
  for (int i = 0; i <= shard; ++i) s = rng.next();
  return s;
}

// Runs `iterations` draws sharded over `workers` threads; `body` fills one
// shard's accumulators. Results merge count-weighted, so worker count only
// changes the shard split, not the estimator.
template <typename State, typename Body>
std::vector<State> run_sharded(long long iterations, int workers, std::uint64_t seed,
                               Body body) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  workers = std::max(1, workers);
  workers = static_cast<int>(std::min<long long>(workers, iterations));
  std::vector<State> states(workers);
  std::vector<std::thread> threads;
  const long long base = iterations / workers;
  const long long rem = iterations % workers;
  for (int w = 0; w < workers; ++w) {
    const long long iters = base + (w < rem ? 1 : 0);
    threads.emplace_back([&, w, iters] {
      Rng rng(sub_seed(seed, w));
      body(rng, iters, states[w]);
    });
  }
  for (auto& th : threads) th.join();
  return states;
}

// Draws `count` distinct cell indices out of `cells` (partial Fisher-Yates).
void sample_cells(Rng& rng, int cells, int count, std::vector<int>& pool,
                  std::vector<int>& out) {
  pool.resize(cells);
  std::iota(pool.begin(), pool.end(), 0);
  out.clear();
  for (int i = 0; i < count; ++i) {
    const int j = i + rng.below(cells - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

struct IndicatorState {
  Accumulator acc;
};

struct RepairState {
  Accumulator traffic;
  Accumulator traffic_sq;  // unused; variance comes from Accumulator
  Accumulator time;
  long long rejected = 0;
};

// --- LRC model: data 0..k-1, local parities k and k+1, globals k+2..n-1 ---

struct LrcOutcome {
  bool feasible = false;
  double cost = 0.0;   // blocks read
  double time = 0.0;   // normalized
  int local_repairs = 0;
  bool global_decode = false;
};

int lrc_group_of(int block, int k) {
  if (block < k / 2) return 0;
  if (block < k) return 1;
  if (block == k) return 0;
  if (block == k + 1) return 1;
  return -1;  // global parity
}

// Iterative accounting: locally repair every group holding exactly one
// failure (k/2 blocks each), then one global decode (k blocks) covers the
// rest when no more than n-k-2 failures remain.
LrcOutcome lrc_repair(const std::vector<char>& failed, int n, int k) {
  LrcOutcome out;
  int group_failures[2] = {0, 0};
  int total = 0;
  for (int b = 0; b < n; ++b) {
    if (!failed[b]) continue;
    ++total;
    const int g = lrc_group_of(b, k);
    if (g >= 0) ++group_failures[g];
  }
  if (total == 0) {
    out.feasible = true;
    return out;
  }
  int remaining = total;
  for (int g = 0; g < 2; ++g) {
    if (group_failures[g] == 1) {
      out.cost += k / 2.0;
      ++out.local_repairs;
      --remaining;
    }
  }
  if (remaining > 0) {
    if (remaining > n - k - 2) return out;  // infeasible
    out.cost += k;
    out.global_decode = true;
  }
  out.feasible = true;
  out.time = std::max(out.local_repairs > 0 ? 0.5 : 0.0,
                      out.global_decode ? 1.0 : 0.0);
  return out;
}

}  // namespace

const char* CodeModel::name() const {
  switch (kind) {
    case Kind::RS: return "rs";
    case Kind::LRC: return "lrc";
    case Kind::CORE: return "core";
  }
  return "?";
}

void CodeModel::validate() const {
  switch (kind) {
    case Kind::RS:
      if (k < 1 || k >= n) throw std::invalid_argument("RS requires 1 <= k < n");
      break;
    case Kind::LRC:
      if (k < 2 || k % 2 != 0 || n < k + 2)
        throw std::invalid_argument("LRC requires even k and n >= k+2");
      break;
    case Kind::CORE:
      CodeParams(n, k, t).validate();
      break;
  }
}

ExperimentReport cluster_count_experiment(const CodeParams& params, int num_failures,
                                          long long iterations, std::uint64_t seed,
                                          int workers) {
  if (num_failures < 1 || num_failures > params.cells())
    throw std::invalid_argument("num_failures out of range");

  auto states = run_sharded<IndicatorState>(
      iterations, workers, seed, [&](Rng& rng, long long iters, IndicatorState& st) {
        std::vector<int> pool, cells, parent(num_failures);
        std::vector<int> row_rep(params.rows()), col_rep(params.n);
        for (long long it = 0; it < iters; ++it) {
          sample_cells(rng, params.cells(), num_failures, pool, cells);
          std::iota(parent.begin(), parent.end(), 0);
          std::fill(row_rep.begin(), row_rep.end(), -1);
          std::fill(col_rep.begin(), col_rep.end(), -1);
          auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
          };
          for (int i = 0; i < num_failures; ++i) {
            const int r = cells[i] / params.n;
            const int c = cells[i] % params.n;
            if (row_rep[r] < 0)
              row_rep[r] = i;
            else
              parent[find(i)] = find(row_rep[r]);
            if (col_rep[c] < 0)
              col_rep[c] = i;
            else
              parent[find(i)] = find(col_rep[c]);
          }
          int clusters = 0;
          for (int i = 0; i < num_failures; ++i)
            if (find(i) == i) ++clusters;
          st.acc.add(clusters);
        }
      });

  Accumulator total;
  for (const auto& st : states) total.merge(st.acc);
  ExperimentReport report;
  report.seed = seed;
  report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                         "clusters_f" + std::to_string(num_failures), total.mean(),
                         total.variance(), total.count});
  return report;
}

ExperimentReport recoverability_experiment(const CodeParams& params, int num_failures,
                                           long long iterations, std::uint64_t seed,
                                           int workers) {
  const RepairBounds b = bounds(params);
  if (num_failures < 1 || num_failures > b.recoverable_upper)
    throw std::invalid_argument("num_failures must be in [1, U]");

  auto states = run_sharded<IndicatorState>(
      iterations, workers, seed, [&](Rng& rng, long long iters, IndicatorState& st) {
        std::vector<int> pool, cells;
        for (long long it = 0; it < iters; ++it) {
          sample_cells(rng, params.cells(), num_failures, pool, cells);
          FailureMatrix fm(params);
          for (int cell : cells) fm.mark_failed(cell / params.n, cell % params.n);
          st.acc.add(is_recoverable(fm) ? 1.0 : 0.0);
        }
      });

  Accumulator total;
  for (const auto& st : states) total.merge(st.acc);
  const double prob = total.mean();
  ExperimentReport report;
  report.seed = seed;
  const std::string suffix = "_f" + std::to_string(num_failures);
  report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                         "recoverability" + suffix, prob, total.variance(),
                         total.count});
  report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                         "nines" + suffix, nines(prob), 0.0, total.count});
  return report;
}

ExperimentReport simulate_repair(const CodeModel& model, double p, long long iterations,
                                 std::uint64_t seed, int workers) {
  model.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");

  auto states = run_sharded<RepairState>(
      iterations, workers, seed, [&](Rng& rng, long long iters, RepairState& st) {
        const int n = model.n;
        const int k = model.k;
        std::vector<char> failed(n);
        for (long long it = 0; it < iters; ++it) {
          switch (model.kind) {
            case CodeModel::Kind::RS: {
              int f = 0;
              for (int b = 0; b < n; ++b) f += rng.bernoulli(p) ? 1 : 0;
              if (f > n - k) {
                ++st.rejected;
                break;
              }
              st.traffic.add(f == 0 ? 0.0 : 1.0);  // one decode reads k blocks
              st.time.add(f == 0 ? 0.0 : 1.0);
              break;
            }
            case CodeModel::Kind::LRC: {
              for (int b = 0; b < n; ++b) failed[b] = rng.bernoulli(p) ? 1 : 0;
              const LrcOutcome out = lrc_repair(failed, n, k);
              if (!out.feasible) {
                ++st.rejected;
                break;
              }
              st.traffic.add(out.cost / k);
              st.time.add(out.time);
              break;
            }
            case CodeModel::Kind::CORE: {
              const CodeParams params(model.n, model.k, model.t);
              FailureMatrix fm(params);
              int f = 0;
              int affected_rows = 0;
              for (int r = 0; r < params.rows(); ++r) {
                bool row_hit = false;
                for (int c = 0; c < params.n; ++c)
                  if (rng.bernoulli(p)) {
                    fm.mark_failed(r, c);
                    ++f;
                    row_hit = true;
                  }
                if (row_hit) ++affected_rows;
              }
              if (f == 0) {
                st.traffic.add(0.0);
                st.time.add(0.0);
                break;
              }
              if (!is_recoverable(fm)) {
                ++st.rejected;
                break;
              }
              const RepairSchedule s = schedule_rgs(fm);
              // group cost attributed across the rows that actually failed
              st.traffic.add(static_cast<double>(s.total_blocks_read) /
                             (static_cast<double>(affected_rows) * k));
              st.time.add(s.normalized_time.value());
              break;
            }
          }
        }
      });

  RepairState total;
  for (const auto& st : states) {
    total.traffic.merge(st.traffic);
    total.time.merge(st.time);
    total.rejected += st.rejected;
  }
  if (total.traffic.count == 0)
    throw std::runtime_error(
        "simulate_repair: no repairable samples after " +
        std::to_string(iterations) + " iterations (all rejected by Pi)");

  ExperimentReport report;
  report.seed = seed;
  report.rejected = total.rejected;
  report.rows.push_back({model.name(), model.n, model.k, model.t, p,
                         "repair_traffic", total.traffic.mean(),
                         total.traffic.variance(), total.traffic.count});
  report.rows.push_back({model.name(), model.n, model.k, model.t, p, "repair_time",
                         total.time.mean(), total.time.variance(),
                         total.time.count});
  return report;
}

ExperimentReport simulate_degraded_read(const CodeModel& model, ReadMode mode, double p,
                                        long long iterations, std::uint64_t seed,
                                        int workers) {
  model.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");

  auto states = run_sharded<RepairState>(
      iterations, workers, seed, [&](Rng& rng, long long iters, RepairState& st) {
        const int n = model.n;
        const int k = model.k;
        for (long long it = 0; it < iters; ++it) {
          double traffic = -1.0;  // <0 means rejected
          switch (model.kind) {
            case CodeModel::Kind::RS: {
              int f = 0, fsys = 0;
              for (int b = 0; b < n; ++b)
                if (rng.bernoulli(p)) {
                  ++f;
                  if (b < k) ++fsys;
                }
              if (f > n - k) break;
              if (mode == ReadMode::Centralized)
                traffic = k;  // Opt1 decode reads exactly k either way
              else
                traffic = (k - fsys) + static_cast<double>(fsys) * k;
              break;
            }
            case CodeModel::Kind::LRC: {
              std::vector<char> failed(n);
              int fsys = 0;
              for (int b = 0; b < n; ++b) {
                failed[b] = rng.bernoulli(p) ? 1 : 0;
                if (failed[b] && b < k) ++fsys;
              }
              int group_failures[2] = {0, 0};
              int total_failed = 0;
              for (int b = 0; b < n; ++b)
                if (failed[b]) {
                  ++total_failed;
                  const int g = lrc_group_of(b, k);
                  if (g >= 0) ++group_failures[g];
                }
              auto locally_repairable = [&](int b) {
                return group_failures[lrc_group_of(b, k)] == 1;
              };
              const bool global_feasible =
                  lrc_repair(failed, n, k).feasible;
              if (mode == ReadMode::Centralized) {
                if (fsys == 0) {
                  traffic = k;
                  break;
                }
                bool all_local = true;
                for (int b = 0; b < k; ++b)
                  if (failed[b] && !locally_repairable(b)) all_local = false;
                if (all_local)
                  traffic = (k - fsys) + fsys * (k / 2.0);
                else if (global_feasible)
                  traffic = k;  // one global decode yields the whole object
              } else {
                double sum = 0.0;
                bool ok = true;
                for (int b = 0; b < k; ++b) {
                  if (!failed[b])
                    sum += 1.0;
                  else if (locally_repairable(b))
                    sum += k / 2.0;
                  else if (global_feasible)
                    sum += k;
                  else
                    ok = false;
                }
                if (ok) traffic = sum;
              }
              break;
            }
            case CodeModel::Kind::CORE: {
              const CodeParams params(model.n, model.k, model.t);
              FailureMatrix fm(params);
              for (int r = 0; r < params.rows(); ++r)
                for (int c = 0; c < params.n; ++c)
                  if (rng.bernoulli(p)) fm.mark_failed(r, c);
              const int row0_avail = params.n - fm.row_failures(0);
              int fsys = 0;
              bool all_vertical = true;
              for (int c = 0; c < k; ++c)
                if (fm.failed(0, c)) {
                  ++fsys;
                  if (fm.col_failures(c) != 1) all_vertical = false;
                }
              if (mode == ReadMode::Centralized) {
                if (fsys == 0)
                  traffic = k;
                else if (all_vertical)
                  traffic = (k - fsys) + static_cast<double>(fsys) * model.t;
                else if (row0_avail >= k)
                  traffic = k;  // fall back to a row decode
              } else {
                double sum = 0.0;
                bool ok = true;
                for (int c = 0; c < k; ++c) {
                  if (!fm.failed(0, c))
                    sum += 1.0;
                  else if (fm.col_failures(c) == 1)
                    sum += model.t;
                  else if (row0_avail >= k)
                    sum += k;
                  else
                    ok = false;
                }
                if (ok) traffic = sum;
              }
              break;
            }
          }
          if (traffic < 0.0)
            ++st.rejected;
          else
            st.traffic.add(traffic / k);
        }
      });

  RepairState total;
  for (const auto& st : states) {
    total.traffic.merge(st.traffic);
    total.rejected += st.rejected;
  }
  if (total.traffic.count == 0)
    throw std::runtime_error("simulate_degraded_read: no readable samples");

  ExperimentReport report;
  report.seed = seed;
  report.rejected = total.rejected;
  const char* metric =
      mode == ReadMode::Centralized ? "read_centralized" : "read_distributed";
  report.rows.push_back({model.name(), model.n, model.k, model.t, p, metric,
                         total.traffic.mean(), total.traffic.variance(),
                         total.traffic.count});
  return report;
}

ExperimentReport sweep_stretch(std::span<const CodeModel> models, double p,
                               SweepMetric metric, long long iterations,
                               std::uint64_t seed, int workers) {
  if (models.empty()) throw std::invalid_argument("sweep_stretch: empty model grid");
  ExperimentReport report;
  report.seed = seed;

  // (code, stretch bucket) -> best row
  std::map<std::pair<std::string, long long>, ExperimentRow> best;
  int idx = 0;
  for (const CodeModel& model : models) {
    const std::uint64_t model_seed = seed + 1000003ULL * static_cast<std::uint64_t>(idx++);
    ExperimentReport r =
        metric == SweepMetric::Read
            ? simulate_degraded_read(model, ReadMode::Centralized, p, iterations,
                                     model_seed, workers)
            : simulate_repair(model, p, iterations, model_seed, workers);
    const std::string want = metric == SweepMetric::Traffic ? "repair_traffic"
                             : metric == SweepMetric::Time  ? "repair_time"
                                                            : "read_centralized";
    for (ExperimentRow row : r.rows) {
      if (row.metric != want) continue;
      row.metric = "sweep_" + want;
      const long long bucket =
          std::llround(1000.0 * static_cast<double>(row.n) / row.k);
      const auto key = std::make_pair(std::string(row.code), bucket);
      auto it = best.find(key);
      if (it == best.end() || row.mean < it->second.mean) best[key] = row;
    }
  }
  for (auto& [key, row] : best) report.rows.push_back(row);
  return report;
}

}  // namespace core
