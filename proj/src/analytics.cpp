#include "core/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace core {
namespace {

void check_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability must be in [0,1]");
}

void check_lrc_params(int n, int k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("LRC requires even k >= 2");
  if (n < k + 2) throw std::invalid_argument("LRC requires n >= k+2");
}

}  // namespace

double binom_pmf(int n, int i, double p) {
  if (i < 0 || i > n) return 0.0;
  if (p == 0.0) return i == 0 ? 1.0 : 0.0;
  if (p == 1.0) return i == n ? 1.0 : 0.0;
  const double lc = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                    std::lgamma(n - i + 1.0);
  return std::exp(lc + i * std::log(p) + (n - i) * std::log1p(-p));
}

double binom_cdf(int n, int i, double p) {
  double sum = 0.0;
  for (int j = 0; j <= i && j <= n; ++j) sum += binom_pmf(n, j, p);
  return sum < 1.0 ? sum : 1.0;
}

double resilience_mds(int n, int k, double p) {
  if (k < 1 || k >= n) throw std::invalid_argument("MDS requires 1 <= k < n");
  check_prob(p);
  return binom_cdf(n, n - k, p);
}

double resilience_lrc(int n, int k, double p) {
  check_lrc_params(n, k);
  check_prob(p);
  const int m = n - k;
  const double theta = (k / 2.0 + 1.0) * p * std::pow(1.0 - p, k / 2.0);
  return binom_cdf(n, m - 2, p) +
         binom_pmf(n, m - 1, p) * 2.0 * theta * (1.0 - theta) +
         binom_pmf(n, m, p) * (1.0 - theta) * (1.0 - theta);
}

double resilience_core_lb(int n, int k, int t, double p) {
  if (t < 1) throw std::invalid_argument("CORE requires t >= 1");
  if (k < 2 || k >= n) throw std::invalid_argument("CORE requires 2 <= k < n");
  check_prob(p);
  // per-column availability: zero or one failure among its t+1 cells
  const double theta =
      std::pow(1.0 - p, t + 1) + (t + 1) * p * std::pow(1.0 - p, t);
  return binom_cdf(n, n - k, 1.0 - theta);
}

double nines(double pi) {
  if (!(pi >= 0.0 && pi <= 1.0))
    throw std::invalid_argument("nines: pi must be in [0,1]");
  if (pi == 1.0) return kSaturatedNines;
  return -std::log10(1.0 - pi);
}

double lrc_avg_single_repair(int n, int k) {
  check_lrc_params(n, k);
  return (2.0 * k * n - static_cast<double>(k) * k - 2.0 * k) / (2.0 * n);
}

}  // namespace core
