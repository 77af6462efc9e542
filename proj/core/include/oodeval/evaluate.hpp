#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oodeval/manifest.hpp"
#include "oodeval/scores.hpp"

namespace oodeval {

enum class MetricId { kAuroc, kFprAt95 };

std::string_view to_string(MetricId id);
std::optional<MetricId> parse_metric_id(std::string_view name);
std::span<const MetricId> all_metric_ids();

/// A metric value in [0, 1]; spread, when present, is 2x the population
/// standard deviation over the ensemble members (single-model scores).
struct MetricValue {
  double value = 0.0;
  std::optional<double> spread;
};

struct ReportRow {
  ScoreId score_id;
  std::string dataset;  // OOD dataset name, or "OOD mean"
  std::optional<MetricValue> auroc;
  std::optional<MetricValue> fpr_at_95;
};

/// Top-1 classification error on the ID dataset; one entry for the ensemble
/// posterior, one for the member average, one per member.
struct ErrorRateRow {
  std::string who;  // "ensemble", "average", or a member label
  double error = 0.0;
};

struct MetricReport {
  std::string id_dataset_name;
  std::vector<ReportRow> rows;
  std::vector<ErrorRateRow> error_rates;  // empty when the ID set has no labels
};

/// Evaluates every requested score against every OOD dataset of the
/// manifest. Ensemble scores give one row per dataset plus an "OOD mean"
/// row (unweighted mean over datasets). Single-model scores are evaluated
/// per member and reported as mean with spread = 2x population std; their
/// "OOD mean" row averages the per-dataset means. Row order: scores as
/// requested, datasets as listed in the manifest.
MetricReport run_eval(const Manifest& manifest,
                      std::span<const ScoreId> score_ids,
                      std::span<const MetricId> metric_ids);

/// Long-format CSV: score_id,dataset,metric,value,spread with values as
/// percentages carrying two decimals. Error-rate rows use score_id
/// "top1-error" and put the subject in the metric column.
void write_report_csv(const MetricReport& report, std::ostream& out);

}  // namespace oodeval
