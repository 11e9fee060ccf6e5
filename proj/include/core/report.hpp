#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace core {

// One result row of a Monte Carlo or closed-form sweep.
struct ExperimentRow {
  std::string code;  // "rs" | "lrc" | "core"
  int n = 0;
  int k = 0;
  int t = 0;  // 0 when not applicable
  double p = 0.0;
  std::string metric;
  double mean = 0.0;
  double variance = 0.0;
  long long samples = 0;  // 0 for closed-form rows
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::uint64_t seed = 0;
  long long rejected = 0;  // samples discarded by conditioning

  // CSV schema: code,n,k,t,stretch,p,metric,mean,variance,samples,seed
  void write_csv(std::ostream& out, bool header = true) const;
};

// Streaming mean/variance accumulator, mergeable across worker shards.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long long count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const Accumulator& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double variance() const {
    if (!count) return 0.0;
    const double m = mean();
    const double v = sum_sq / count - m * m;
    return v > 0.0 ? v : 0.0;
  }
};

}  // namespace core
