#include "oodeval/logits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>
#include <utility>

#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

LogitVector::LogitVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw invalid_input_error("LogitVector: need at least 2 classes, got " +
                              std::to_string(values_.size()));
  }
  if (!all_finite(values_)) {
    throw invalid_input_error("LogitVector: non-finite entry");
  }
}

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw invalid_input_error("ProbVector: need at least 2 classes, got " +
                              std::to_string(values_.size()));
  }
  double sum = 0.0;
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw invalid_input_error("ProbVector: entry outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw invalid_input_error("ProbVector: entries sum to " +
                              std::to_string(sum) + ", expected 1");
  }
}

LogitMatrix::LogitMatrix(std::vector<std::string> sample_ids,
                         std::vector<LogitVector> rows,
                         std::optional<std::vector<std::size_t>> labels)
    : sample_ids_(std::move(sample_ids)),
      rows_(std::move(rows)),
      labels_(std::move(labels)) {
  if (rows_.empty()) {
    throw invalid_input_error("LogitMatrix: no rows");
  }
  if (sample_ids_.size() != rows_.size()) {
    throw invalid_input_error("LogitMatrix: sample_ids/rows length mismatch");
  }
  const std::size_t k = rows_.front().num_classes();
  for (const auto& row : rows_) {
    if (row.num_classes() != k) {
      throw invalid_input_error("LogitMatrix: rows disagree on class count");
    }
  }
  std::unordered_set<std::string> seen;
  seen.reserve(sample_ids_.size());
  for (const auto& id : sample_ids_) {
    if (!seen.insert(id).second) {
      throw invalid_input_error("LogitMatrix: duplicate sample_id '" + id + "'");
    }
  }
  if (labels_ && labels_->size() != rows_.size()) {
    throw invalid_input_error("LogitMatrix: labels/rows length mismatch");
  }
}

ProbVector stable_softmax(const LogitVector& v) {
  const auto xs = v.values();
  const double m = *std::max_element(xs.begin(), xs.end());
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out[k] = std::exp(xs[k] - m);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
  return ProbVector(std::move(out));
}

double log_sum_exp(const LogitVector& v) {
  const auto xs = v.values();
  const double m = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

double entropy(const ProbVector& p) {
  double h = 0.0;
  for (double pk : p.values()) {
    if (pk > 0.0) h -= pk * std::log(pk);
  }
  return h;
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.num_classes() != q.num_classes()) {
    throw invalid_input_error("kl_divergence: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < p.num_classes(); ++k) {
    const double pk = p[k];
    if (pk == 0.0) continue;
    if (q[k] == 0.0) return std::numeric_limits<double>::infinity();
    d += pk * std::log(pk / q[k]);
  }
  return d;
}

}  // namespace oodeval
