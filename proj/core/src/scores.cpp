#include "oodeval/scores.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

constexpr std::array<ScoreId, 8> kAllScores = {
    ScoreId::kMsp,        ScoreId::kEntropy,    ScoreId::kEnergy,
    ScoreId::kEnsMsp,     ScoreId::kEnsEntropy, ScoreId::kAvgEntropy,
    ScoreId::kMutualInfo, ScoreId::kAvgEnergy,
};

void require_members(std::size_t m, const char* op) {
  if (m == 0) {
    throw invalid_input_error(std::string(op) + ": empty ensemble");
  }
}

void require_shared_k(std::size_t got, std::size_t want, const char* op) {
  if (got != want) {
    throw invalid_input_error(std::string(op) +
                              ": members disagree on class count");
  }
}

}  // namespace

std::string_view to_string(ScoreId id) {
  switch (id) {
    case ScoreId::kMsp: return "msp";
    case ScoreId::kEntropy: return "entropy";
    case ScoreId::kEnergy: return "energy";
    case ScoreId::kEnsMsp: return "ens-msp";
    case ScoreId::kEnsEntropy: return "ens-entropy";
    case ScoreId::kAvgEntropy: return "avg-entropy";
    case ScoreId::kMutualInfo: return "mi";
    case ScoreId::kAvgEnergy: return "avg-energy";
  }
  return "unknown";
}

std::optional<ScoreId> parse_score_id(std::string_view name) {
  for (ScoreId id : kAllScores) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::span<const ScoreId> all_score_ids() { return kAllScores; }

bool is_single_model_score(ScoreId id) {
  return id == ScoreId::kMsp || id == ScoreId::kEntropy ||
         id == ScoreId::kEnergy;
}

EnsembleBatch::EnsembleBatch(std::vector<LogitMatrix> members)
    : members_(std::move(members)) {
  require_members(members_.size(), "EnsembleBatch");
  const auto& first = members_.front();
  for (std::size_t m = 1; m < members_.size(); ++m) {
    require_shared_k(members_[m].num_classes(), first.num_classes(),
                     "EnsembleBatch");
    if (members_[m].sample_ids() != first.sample_ids()) {
      throw invalid_input_error(
          "EnsembleBatch: member " + std::to_string(m) +
          " sample ids do not match member 0 (same ids, same order required)");
    }
  }
}

double msp_uncertainty(const ProbVector& p) {
  const auto xs = p.values();
  return -*std::max_element(xs.begin(), xs.end());
}

double energy_uncertainty(const LogitVector& v) { return -log_sum_exp(v); }

ProbVector ensemble_posterior(std::span<const ProbVector> probs) {
  require_members(probs.size(), "ensemble_posterior");
  const std::size_t k = probs.front().num_classes();
  std::vector<double> mean(k, 0.0);
  for (const auto& p : probs) {
    require_shared_k(p.num_classes(), k, "ensemble_posterior");
    for (std::size_t i = 0; i < k; ++i) mean[i] += p[i];
  }
  const double inv_m = 1.0 / static_cast<double>(probs.size());
  for (double& x : mean) x *= inv_m;
  return ProbVector(std::move(mean));
}

double ensemble_entropy(std::span<const ProbVector> probs) {
  return entropy(ensemble_posterior(probs));
}

double average_entropy(std::span<const ProbVector> probs) {
  require_members(probs.size(), "average_entropy");
  double sum = 0.0;
  for (const auto& p : probs) sum += entropy(p);
  return sum / static_cast<double>(probs.size());
}

double mutual_information(std::span<const ProbVector> probs) {
  require_members(probs.size(), "mutual_information");
  // Single member: both terms are the same computation, so the difference
  // must be exactly zero rather than rounding noise.
  if (probs.size() == 1) return 0.0;
  return ensemble_entropy(probs) - average_entropy(probs);
}

double mutual_information_kl(std::span<const ProbVector> probs) {
  require_members(probs.size(), "mutual_information_kl");
  if (probs.size() == 1) return 0.0;
  const ProbVector posterior = ensemble_posterior(probs);
  double sum = 0.0;
  for (const auto& p : probs) sum += kl_divergence(p, posterior);
  return sum / static_cast<double>(probs.size());
}

double average_energy(std::span<const LogitVector> logits) {
  require_members(logits.size(), "average_energy");
  const std::size_t k = logits.front().num_classes();
  double sum = 0.0;
  for (const auto& v : logits) {
    require_shared_k(v.num_classes(), k, "average_energy");
    sum += energy_uncertainty(v);
  }
  return sum / static_cast<double>(logits.size());
}

double ensemble_msp(std::span<const ProbVector> probs) {
  return msp_uncertainty(ensemble_posterior(probs));
}

ScoreSeries score_batch(const EnsembleBatch& batch, ScoreId id,
                        std::optional<std::size_t> member) {
  const std::size_t m_count = batch.num_members();
  std::optional<std::size_t> single = member;
  if (is_single_model_score(id)) {
    if (!single) {
      if (m_count != 1) {
        throw invalid_input_error(
            std::string("score_batch: single-model score '") +
            std::string(to_string(id)) +
            "' on an ensemble of " + std::to_string(m_count) +
            " members needs an explicit member index");
      }
      single = 0;
    }
    if (*single >= m_count) {
      throw invalid_input_error("score_batch: member index " +
                                std::to_string(*single) + " out of range");
    }
  }

  const std::size_t n = batch.num_samples();
  ScoreSeries series{id, batch.sample_ids(), std::vector<double>(n)};

  for (std::size_t i = 0; i < n; ++i) {
    double value = 0.0;
    if (is_single_model_score(id)) {
      const LogitVector& v = batch.member(*single).row(i);
      switch (id) {
        case ScoreId::kMsp: value = msp_uncertainty(stable_softmax(v)); break;
        case ScoreId::kEntropy: value = entropy(stable_softmax(v)); break;
        case ScoreId::kEnergy: value = energy_uncertainty(v); break;
        default: break;
      }
    } else if (id == ScoreId::kAvgEnergy) {
      std::vector<LogitVector> rows;
      rows.reserve(m_count);
      for (std::size_t m = 0; m < m_count; ++m) {
        rows.push_back(batch.member(m).row(i));
      }
      value = average_energy(rows);
    } else {
      std::vector<ProbVector> probs;
      probs.reserve(m_count);
      for (std::size_t m = 0; m < m_count; ++m) {
        probs.push_back(stable_softmax(batch.member(m).row(i)));
      }
      switch (id) {
        case ScoreId::kEnsMsp: value = ensemble_msp(probs); break;
        case ScoreId::kEnsEntropy: value = ensemble_entropy(probs); break;
        case ScoreId::kAvgEntropy: value = average_entropy(probs); break;
        case ScoreId::kMutualInfo: value = mutual_information(probs); break;
        default: break;
      }
    }
    series.values[i] = value;
  }
  return series;
}

}  // namespace oodeval
