#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oodeval {

/// Raw classifier outputs for one sample: K >= 2 finite reals.
class LogitVector {
 public:
  /// Throws invalid_input_error unless values has at least two entries and
  /// every entry is finite.
  explicit LogitVector(std::vector<double> values);

  std::size_t num_classes() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// A categorical distribution: entries in [0, 1] summing to 1 within 1e-9.
///
/// Entries are never clipped; exact zeros (e.g. softmax underflow) are valid
/// and handled downstream by the 0 * ln 0 = 0 convention.
class ProbVector {
 public:
  /// Throws invalid_input_error unless the entries form a valid distribution
  /// over K >= 2 classes.
  explicit ProbVector(std::vector<double> values);

  std::size_t num_classes() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

using ProbMatrix = std::vector<ProbVector>;

/// Batch of logits for one model over one dataset. Rows share K and
/// sample ids are unique; labels, when present, align with rows.
class LogitMatrix {
 public:
  LogitMatrix(std::vector<std::string> sample_ids, std::vector<LogitVector> rows,
              std::optional<std::vector<std::size_t>> labels = std::nullopt);

  std::size_t num_samples() const { return rows_.size(); }
  std::size_t num_classes() const { return rows_.front().num_classes(); }
  const std::vector<std::string>& sample_ids() const { return sample_ids_; }
  const LogitVector& row(std::size_t n) const { return rows_[n]; }
  const std::vector<LogitVector>& rows() const { return rows_; }
  const std::optional<std::vector<std::size_t>>& labels() const { return labels_; }

 private:
  std::vector<std::string> sample_ids_;
  std::vector<LogitVector> rows_;
  std::optional<std::vector<std::size_t>> labels_;
};

/// Softmax with the max-shift: exp(v_k - max v) / sum_j exp(v_j - max v).
/// Immune to overflow for any finite input; output sums to 1 within 1e-12.
ProbVector stable_softmax(const LogitVector& v);

/// max(v) + log sum exp(v - max v). Satisfies
/// log_sum_exp(v + c) = log_sum_exp(v) + c up to rounding.
double log_sum_exp(const LogitVector& v);

/// Shannon entropy -sum p_k ln p_k in nats, with 0 * ln 0 = 0.
/// Lies in [0, ln K] up to rounding.
double entropy(const ProbVector& p);

/// KL divergence sum p_k ln(p_k / q_k) in nats. Returns +infinity when some
/// q_k = 0 carries p_k > 0. Throws invalid_input_error on dimension mismatch.
double kl_divergence(const ProbVector& p, const ProbVector& q);

}  // namespace oodeval
