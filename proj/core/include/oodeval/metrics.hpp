#pragma once

#include <span>
#include <vector>

#include "oodeval/logits.hpp"

namespace oodeval {

enum class Detection { kId, kOod };

/// Threshold rule: OOD iff u >= t (the boundary belongs to OOD).
Detection detect(double u, double t);

/// Uncertainty scores of the in-distribution and out-of-distribution
/// populations. Ops validate both sides non-empty and finite.
struct DetectionSplit {
  std::vector<double> id_scores;
  std::vector<double> ood_scores;
};

/// Probability that a random OOD score exceeds a random ID score, ties
/// counted 1/2 (the Mann-Whitney statistic). Rank-sum with average ranks
/// over ties, O(N log N); agrees bitwise with auroc_pairwise_oracle.
double auroc(const DetectionSplit& split);

/// Brute-force O(N^2) enumeration of the same statistic. Test reference;
/// keep N_id * N_ood small.
double auroc_pairwise_oracle(const DetectionSplit& split);

/// Smallest t, drawn from the observed ID scores plus +infinity, such that
/// the fraction of ID scores strictly below t reaches `level`.
double threshold_at_tpr(std::span<const double> id_scores, double level);

/// Fraction of OOD scores admitted as ID when the threshold keeps 95% of ID:
/// #{ood: u < t} / N_ood with t = threshold_at_tpr(id_scores, 0.95).
double fpr_at_95_tpr(const DetectionSplit& split);

/// Affine map making a score a binary OOD probability: P(OOD) = a*u + b.
struct BinaryProbMap {
  double a = 1.0;
  double b = 0.0;
};

/// Applies the map; throws invalid_calibration_error if a*u + b leaves [0, 1]
/// or the map has a <= 0.
double binary_prob_map(double u, const BinaryProbMap& map);

struct NllGap {
  double ensemble_nll;
  double average_nll;
  bool infinite_member;  // some member assigned probability 0 to the truth
};

/// Negative log-likelihood of the averaged binary classifier vs the average
/// member NLL for the true status s_true. member_ood_probs holds each
/// member's P(s = OOD); Jensen guarantees ensemble_nll <= average_nll.
NllGap ensemble_nll_gap(std::span<const double> member_ood_probs,
                        Detection s_true);

/// Fraction of samples where argmax_k p_k differs from the label; argmax
/// ties resolve to the lowest class index.
double top1_error(const ProbMatrix& probs, std::span<const std::size_t> labels);

}  // namespace oodeval
