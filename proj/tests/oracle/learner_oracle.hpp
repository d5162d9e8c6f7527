#pragma once

// Test-only straight-line version of the mismatch update loop with an
// exhaustive argmin scan (k = 1, additive-subtractive rule). Independent of
// include/neuroami/learner.hpp.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct OracleStep {
  double raw = 0.0;
  int predicted = 0;
  double deviant_after = 0.0;
};

inline std::vector<OracleStep> run_addsub(const std::vector<int>& seq, int L, std::size_t N, double A, double lp) {
  std::vector<OracleStep> out;
  double m = 0.0;
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const int prev = seq[t - 1];
    const int star = seq[t];
    const double raw = prev + m;
    double r = raw >= 0 ? std::floor(raw + 0.5) : -std::floor(-raw + 0.5);
    if (r < 1) r = 1;
    if (r > L) r = L;
    const double diff = raw - star;
    if (diff == 0) {
      m = m + lp;
    } else {
      double best = 0.0;
      double best_res = INFINITY;
      for (std::size_t i = 1; i <= N; ++i) {
        const double k = A * static_cast<double>(i) / static_cast<double>(N);
        const double cand = diff > 0 ? m - k : m + k;
        const double res = std::fabs(prev + cand - star);
        if (res < best_res || (res == best_res && std::fabs(cand) < std::fabs(best))) {
          best = cand;
          best_res = res;
        }
      }
      m = best;
    }
    out.push_back({raw, static_cast<int>(r), m});
  }
  return out;
}

}  // namespace oracle
