#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/failure_matrix.hpp"
#include "core/params.hpp"
#include "core/report.hpp"

namespace core {

// Code family being modeled; t is meaningful for CORE only.
struct CodeModel {
  enum class Kind { RS, LRC, CORE };
  Kind kind;
  int n = 0;
  int k = 0;
  int t = 0;

  const char* name() const;
  void validate() const;
};

enum class ReadMode { Centralized, Distributed };
enum class SweepMetric { Traffic, Time, Read };

// Mean cluster count over uniformly random placements of num_failures
// distinct failed cells on the (t+1) x n grid.
ExperimentReport cluster_count_experiment(const CodeParams& params, int num_failures,
                                          long long iterations, std::uint64_t seed,
                                          int workers = 1);

// Estimated Pr(recoverable) (plus its nines) over uniformly random
// placements of num_failures distinct failed cells.
ExperimentReport recoverability_experiment(const CodeParams& params, int num_failures,
                                           long long iterations, std::uint64_t seed,
                                           int workers = 1);

// Monte Carlo E(W|Pi), Var(W|Pi), E(T|Pi), Var(T|Pi): traffic W normalized by
// the k-block object size, time T by the time to download one object over a
// single link. Non-repairable draws are discarded (conditioning on Pi).
ExperimentReport simulate_repair(const CodeModel& model, double p, long long iterations,
                                 std::uint64_t seed, int workers = 1);

// Traffic to read one object in a degraded state, normalized by k blocks;
// conditioned on readability.
ExperimentReport simulate_degraded_read(const CodeModel& model, ReadMode mode, double p,
                                        long long iterations, std::uint64_t seed,
                                        int workers = 1);

// Minimum metric value per stretch-factor bucket per code family.
ExperimentReport sweep_stretch(std::span<const CodeModel> models, double p,
                               SweepMetric metric, long long iterations,
                               std::uint64_t seed, int workers = 1);

}  // namespace core
