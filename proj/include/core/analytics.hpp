#pragma once

#include <limits>

namespace core {

// Binomial pmf / cdf computed in log space; exact enough for n <= 64.
double binom_pmf(int n, int i, double p);
double binom_cdf(int n, int i, double p);

// Static resilience of an MDS (n,k) code: Pr(B(n,p) <= n-k).
double resilience_mds(int n, int k, double p);

// Static resilience of an (n,k) LRC code (two local groups of k/2, one local
// parity each, n-k-2 global parities). Requires even k and n >= k+2.
double resilience_lrc(int n, int k, double p);

// Lower bound on the static resilience of the (n,k,t) CORE product code:
// Pr(#columns with 2+ failures <= n-k), column availability
// theta = (1-p)^(t+1) + (t+1) p (1-p)^t.
double resilience_core_lb(int n, int k, int t, double p);

// nines(pi) = log10(1/(1-pi)); +infinity at pi = 1.
double nines(double pi);

// Average blocks read to repair one missing LRC block: (2kn - k^2 - 2k)/(2n).
double lrc_avg_single_repair(int n, int k);

inline constexpr double kSaturatedNines = std::numeric_limits<double>::infinity();

}  // namespace core
