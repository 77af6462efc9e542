#include "oodeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw invalid_input_error(std::string(what) + ": non-finite value");
  }
}

void require_split(const DetectionSplit& split, const char* op) {
  if (split.id_scores.empty() || split.ood_scores.empty()) {
    throw invalid_input_error(std::string(op) + ": empty population");
  }
  for (double u : split.id_scores) require_finite(u, op);
  for (double u : split.ood_scores) require_finite(u, op);
}

}  // namespace

Detection detect(double u, double t) {
  require_finite(u, "detect");
  require_finite(t, "detect");
  return u < t ? Detection::kId : Detection::kOod;
}

double auroc(const DetectionSplit& split) {
  require_split(split, "auroc");
  const std::size_t n_id = split.id_scores.size();
  const std::size_t n_ood = split.ood_scores.size();

  struct Entry {
    double value;
    bool is_ood;
  };
  std::vector<Entry> all;
  all.reserve(n_id + n_ood);
  for (double u : split.id_scores) all.push_back({u, false});
  for (double u : split.ood_scores) all.push_back({u, true});
  std::sort(all.begin(), all.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  // Average ranks over tie groups. Doubled ranks stay integral, so the rank
  // sum accumulates exactly and the final division is the only rounding --
  // this is what makes the result bitwise-equal to the pairwise enumeration.
  std::int64_t twice_rank_sum_ood = 0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    // 1-based ranks i+1 .. j share the average (i+1+j)/2.
    const std::int64_t twice_avg_rank = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (all[t].is_ood) twice_rank_sum_ood += twice_avg_rank;
    }
    i = j;
  }

  const std::int64_t twice_u =
      twice_rank_sum_ood -
      static_cast<std::int64_t>(n_ood) * static_cast<std::int64_t>(n_ood + 1);
  return (0.5 * static_cast<double>(twice_u)) /
         (static_cast<double>(n_id) * static_cast<double>(n_ood));
}

double auroc_pairwise_oracle(const DetectionSplit& split) {
  require_split(split, "auroc_pairwise_oracle");
  double numerator = 0.0;
  for (double id_u : split.id_scores) {
    for (double ood_u : split.ood_scores) {
      if (ood_u > id_u) {
        numerator += 1.0;
      } else if (ood_u == id_u) {
        numerator += 0.5;
      }
    }
  }
  return numerator / (static_cast<double>(split.id_scores.size()) *
                      static_cast<double>(split.ood_scores.size()));
}

double threshold_at_tpr(std::span<const double> id_scores, double level) {
  if (id_scores.empty()) {
    throw invalid_input_error("threshold_at_tpr: empty input");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw invalid_input_error("threshold_at_tpr: level must be in (0, 1)");
  }
  for (double u : id_scores) require_finite(u, "threshold_at_tpr");

  std::vector<double> sorted(id_scores.begin(), id_scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    // i elements lie strictly below sorted[i].
    if (static_cast<double>(i) / n >= level) return sorted[i];
  }
  return std::numeric_limits<double>::infinity();
}

double fpr_at_95_tpr(const DetectionSplit& split) {
  require_split(split, "fpr_at_95_tpr");
  const double t = threshold_at_tpr(split.id_scores, 0.95);
  std::size_t below = 0;
  for (double u : split.ood_scores) {
    if (u < t) ++below;
  }
  return static_cast<double>(below) /
         static_cast<double>(split.ood_scores.size());
}

double binary_prob_map(double u, const BinaryProbMap& map) {
  require_finite(u, "binary_prob_map");
  if (!(map.a > 0.0) || !std::isfinite(map.a) || !std::isfinite(map.b)) {
    throw invalid_calibration_error("binary_prob_map: need finite a > 0");
  }
  const double p = map.a * u + map.b;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw invalid_calibration_error(
        "binary_prob_map: a*u + b = " + std::to_string(p) + " outside [0, 1]");
  }
  return p;
}

NllGap ensemble_nll_gap(std::span<const double> member_ood_probs,
                        Detection s_true) {
  if (member_ood_probs.empty()) {
    throw invalid_input_error("ensemble_nll_gap: empty ensemble");
  }
  double mean_p = 0.0;
  double sum_nll = 0.0;
  bool infinite = false;
  for (double p_ood : member_ood_probs) {
    if (!(p_ood >= 0.0 && p_ood <= 1.0)) {
      throw invalid_input_error(
          "ensemble_nll_gap: member probability outside [0, 1]");
    }
    const double p_true = s_true == Detection::kOod ? p_ood : 1.0 - p_ood;
    mean_p += p_true;
    if (p_true == 0.0) {
      infinite = true;
      sum_nll = std::numeric_limits<double>::infinity();
    } else {
      sum_nll += -std::log(p_true);
    }
  }
  const double m = static_cast<double>(member_ood_probs.size());
  return NllGap{-std::log(mean_p / m), sum_nll / m, infinite};
}

double top1_error(const ProbMatrix& probs, std::span<const std::size_t> labels) {
  if (probs.empty()) {
    throw invalid_input_error("top1_error: no samples");
  }
  if (probs.size() != labels.size()) {
    throw invalid_input_error("top1_error: probs/labels length mismatch");
  }
  std::size_t wrong = 0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const ProbVector& p = probs[n];
    if (labels[n] >= p.num_classes()) {
      throw invalid_input_error("top1_error: label out of range at sample " +
                                std::to_string(n));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < p.num_classes(); ++k) {
      if (p[k] > p[best]) best = k;  // strict: ties keep the lowest index
    }
    if (best != labels[n]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(probs.size());
}

}  // namespace oodeval
