#pragma once

// Independent reference computations the tests check the library against.
// Everything here deliberately takes the slow, direct route: extended
// precision, exhaustive scans, full double loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace refcalc {

/// log sum exp by direct extended-precision summation, no max shift.
inline double direct_log_sum_exp(std::span<const double> v) {
  long double sum = 0.0L;
  for (double x : v) sum += expl(static_cast<long double>(x));
  return static_cast<double>(logl(sum));
}

/// Energy via compensated (Kahan) extended-precision summation.
inline double compensated_energy(std::span<const double> v) {
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (double x : v) {
    const long double term = expl(static_cast<long double>(x)) - carry;
    const long double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return static_cast<double>(-logl(sum));
}

inline double direct_entropy(std::span<const double> p) {
  long double h = 0.0L;
  for (double pk : p) {
    if (pk > 0.0) h -= static_cast<long double>(pk) * logl(pk);
  }
  return static_cast<double>(h);
}

inline double direct_kl(std::span<const double> p, std::span<const double> q) {
  long double d = 0.0L;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return std::numeric_limits<double>::infinity();
    d += static_cast<long double>(p[k]) * logl(static_cast<long double>(p[k]) /
                                               static_cast<long double>(q[k]));
  }
  return static_cast<double>(d);
}

inline std::vector<double> direct_mean(const std::vector<std::vector<double>>& rows) {
  std::vector<double> mean(rows.front().size(), 0.0);
  for (std::size_t k = 0; k < mean.size(); ++k) {
    long double sum = 0.0L;
    for (const auto& row : rows) sum += row[k];
    mean[k] = static_cast<double>(sum / static_cast<long double>(rows.size()));
  }
  return mean;
}

/// Exhaustive threshold scan: try every observed ID value (ascending) plus
/// +infinity, take the first whose strictly-below fraction reaches `level`.
inline double scan_threshold_at_tpr(std::span<const double> id_scores,
                                    double level) {
  std::vector<double> candidates(id_scores.begin(), id_scores.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  candidates.push_back(std::numeric_limits<double>::infinity());
  for (double t : candidates) {
    std::size_t below = 0;
    for (double u : id_scores) {
      if (u < t) ++below;
    }
    if (static_cast<double>(below) / static_cast<double>(id_scores.size()) >=
        level) {
      return t;
    }
  }
  return std::numeric_limits<double>::infinity();
}

inline double scan_fpr_at_95(std::span<const double> id_scores,
                             std::span<const double> ood_scores) {
  const double t = scan_threshold_at_tpr(id_scores, 0.95);
  std::size_t below = 0;
  for (double u : ood_scores) {
    if (u < t) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(ood_scores.size());
}

inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace refcalc
