#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oodeval/logits.hpp"

namespace oodeval {

/// The closed set of uncertainty scores. Every score is oriented so that
/// higher means more likely out-of-distribution.
enum class ScoreId {
  kMsp,             // -max_k p_k of one model
  kEntropy,         // predictive entropy of one model
  kEnergy,          // -log sum exp of one model's logits
  kEnsMsp,          // -max_k of the ensemble posterior
  kEnsEntropy,      // entropy of the ensemble posterior
  kAvgEntropy,      // mean of per-member entropies
  kMutualInfo,      // ensemble entropy minus average entropy
  kAvgEnergy,       // mean of per-member energies
};

std::string_view to_string(ScoreId id);

/// Parses "msp", "entropy", "energy", "ens-msp", "ens-entropy",
/// "avg-entropy", "mi", "avg-energy"; nullopt for anything else.
std::optional<ScoreId> parse_score_id(std::string_view name);

/// All score ids in their canonical reporting order.
std::span<const ScoreId> all_score_ids();

/// True for scores defined on a single model rather than an ensemble.
bool is_single_model_score(ScoreId id);

/// M aligned logit matrices: identical sample ids in identical order,
/// identical class count.
class EnsembleBatch {
 public:
  /// Throws invalid_input_error when members is empty or misaligned.
  explicit EnsembleBatch(std::vector<LogitMatrix> members);

  std::size_t num_members() const { return members_.size(); }
  std::size_t num_samples() const { return members_.front().num_samples(); }
  std::size_t num_classes() const { return members_.front().num_classes(); }
  const LogitMatrix& member(std::size_t m) const { return members_[m]; }
  const std::vector<std::string>& sample_ids() const {
    return members_.front().sample_ids();
  }

 private:
  std::vector<LogitMatrix> members_;
};

/// Per-sample values of one score over one dataset.
struct ScoreSeries {
  ScoreId score_id;
  std::vector<std::string> sample_ids;
  std::vector<double> values;
};

/// -max_k p_k; lies in [-1, -1/K].
double msp_uncertainty(const ProbVector& p);

/// -log sum exp(v). Shift-invariant up to rounding: energy(v + c) = energy(v) - c.
double energy_uncertainty(const LogitVector& v);

/// Elementwise mean of the member distributions.
ProbVector ensemble_posterior(std::span<const ProbVector> probs);

/// Entropy of the ensemble posterior ("total uncertainty").
double ensemble_entropy(std::span<const ProbVector> probs);

/// Mean of the per-member entropies ("average uncertainty").
double average_entropy(std::span<const ProbVector> probs);

/// Ensemble entropy minus average entropy; measures member diversity.
/// Non-negative up to rounding, exactly zero for a single member.
double mutual_information(std::span<const ProbVector> probs);

/// Mean KL divergence from each member to the ensemble posterior.
/// Algebraically identical to mutual_information; kept as an independent
/// second route for cross-checking.
double mutual_information_kl(std::span<const ProbVector> probs);

/// Mean of the per-member energies. This averages the score, not the logits.
double average_energy(std::span<const LogitVector> logits);

/// MSP of the ensemble posterior.
double ensemble_msp(std::span<const ProbVector> probs);

/// Applies the named score to every sample of the batch, preserving order
/// and sample ids. Single-model scores need member set (or M = 1, where it
/// defaults to the only member). Throws invalid_input_error otherwise.
ScoreSeries score_batch(const EnsembleBatch& batch, ScoreId id,
                        std::optional<std::size_t> member = std::nullopt);

}  // namespace oodeval
