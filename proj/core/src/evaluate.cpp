#include "oodeval/evaluate.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <utility>

#include "oodeval/errors.hpp"
#include "oodeval/metrics.hpp"

namespace oodeval {

namespace {

constexpr std::array<MetricId, 2> kAllMetrics = {MetricId::kAuroc,
                                                 MetricId::kFprAt95};

double eval_metric(MetricId id, const DetectionSplit& split) {
  return id == MetricId::kAuroc ? auroc(split) : fpr_at_95_tpr(split);
}

double mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  const double mu = mean(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - mu) * (x - mu);
  return std::sqrt(sum / static_cast<double>(xs.size()));
}

std::string percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value * 100.0);
  return buf;
}

void set_metric(ReportRow& row, MetricId id, MetricValue value) {
  (id == MetricId::kAuroc ? row.auroc : row.fpr_at_95) = value;
}

}  // namespace

std::string_view to_string(MetricId id) {
  return id == MetricId::kAuroc ? "auroc" : "fpr-at-95";
}

std::optional<MetricId> parse_metric_id(std::string_view name) {
  for (MetricId id : kAllMetrics) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::span<const MetricId> all_metric_ids() { return kAllMetrics; }

MetricReport run_eval(const Manifest& manifest,
                      std::span<const ScoreId> score_ids,
                      std::span<const MetricId> metric_ids) {
  const EnsembleBatch id_batch = load_dataset(manifest, manifest.id_dataset);
  std::vector<EnsembleBatch> ood_batches;
  ood_batches.reserve(manifest.ood_datasets.size());
  for (const auto& dataset : manifest.ood_datasets) {
    ood_batches.push_back(load_dataset(manifest, dataset));
  }
  const std::size_t m_count = id_batch.num_members();
  const std::size_t d_count = ood_batches.size();

  MetricReport report;
  report.id_dataset_name = manifest.id_dataset.name;

  for (ScoreId score : score_ids) {
    std::vector<ReportRow> rows(d_count + 1);
    for (std::size_t d = 0; d < d_count; ++d) {
      rows[d] = ReportRow{score, manifest.ood_datasets[d].name, {}, {}};
    }
    rows[d_count] = ReportRow{score, "OOD mean", {}, {}};

    // Score series are computed once per dataset and reused for every metric.
    std::vector<std::vector<double>> per_metric_values(metric_ids.size(),
                                                       std::vector<double>(d_count));
    if (is_single_model_score(score)) {
      std::vector<ScoreSeries> id_series;
      id_series.reserve(m_count);
      for (std::size_t m = 0; m < m_count; ++m) {
        id_series.push_back(score_batch(id_batch, score, m));
      }
      for (std::size_t d = 0; d < d_count; ++d) {
        std::vector<ScoreSeries> ood_series;
        ood_series.reserve(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
          ood_series.push_back(score_batch(ood_batches[d], score, m));
        }
        for (std::size_t mx = 0; mx < metric_ids.size(); ++mx) {
          std::vector<double> per_member(m_count);
          for (std::size_t m = 0; m < m_count; ++m) {
            per_member[m] = eval_metric(
                metric_ids[mx],
                DetectionSplit{id_series[m].values, ood_series[m].values});
          }
          per_metric_values[mx][d] = mean(per_member);
          set_metric(rows[d], metric_ids[mx],
                     MetricValue{per_metric_values[mx][d],
                                 m_count > 1
                                     ? std::optional(2.0 * population_std(per_member))
                                     : std::nullopt});
        }
      }
    } else {
      const ScoreSeries id_series = score_batch(id_batch, score);
      for (std::size_t d = 0; d < d_count; ++d) {
        const ScoreSeries ood = score_batch(ood_batches[d], score);
        for (std::size_t mx = 0; mx < metric_ids.size(); ++mx) {
          per_metric_values[mx][d] = eval_metric(
              metric_ids[mx], DetectionSplit{id_series.values, ood.values});
          set_metric(rows[d], metric_ids[mx],
                     MetricValue{per_metric_values[mx][d], {}});
        }
      }
    }
    if (d_count > 0) {
      for (std::size_t mx = 0; mx < metric_ids.size(); ++mx) {
        set_metric(rows[d_count], metric_ids[mx],
                   MetricValue{mean(per_metric_values[mx]), {}});
      }
    }
    if (d_count > 0) {
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
  }

  // Top-1 error on the ID dataset when labels are present.
  if (id_batch.member(0).labels()) {
    const auto& labels = *id_batch.member(0).labels();
    const std::size_t n = id_batch.num_samples();
    std::vector<double> member_error(m_count);
    ProbMatrix posterior_rows;
    posterior_rows.reserve(n);
    std::vector<ProbMatrix> member_probs(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      member_probs[m].reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        member_probs[m].push_back(stable_softmax(id_batch.member(m).row(i)));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<ProbVector> at_sample;
      at_sample.reserve(m_count);
      for (std::size_t m = 0; m < m_count; ++m) {
        at_sample.push_back(member_probs[m][i]);
      }
      posterior_rows.push_back(ensemble_posterior(at_sample));
    }
    report.error_rates.push_back(
        ErrorRateRow{"ensemble", top1_error(posterior_rows, labels)});
    for (std::size_t m = 0; m < m_count; ++m) {
      member_error[m] = top1_error(member_probs[m], labels);
    }
    report.error_rates.push_back(ErrorRateRow{"average", mean(member_error)});
    for (std::size_t m = 0; m < m_count; ++m) {
      report.error_rates.push_back(
          ErrorRateRow{manifest.members[m], member_error[m]});
    }
  }
  return report;
}

void write_report_csv(const MetricReport& report, std::ostream& out) {
  out << "score_id,dataset,metric,value,spread\n";
  const auto emit = [&](const ReportRow& row, MetricId metric,
                        const std::optional<MetricValue>& value) {
    if (!value) return;
    out << to_string(row.score_id) << ',' << row.dataset << ','
        << to_string(metric) << ',' << percent(value->value) << ',';
    if (value->spread) out << percent(*value->spread);
    out << '\n';
  };
  for (const auto& row : report.rows) {
    emit(row, MetricId::kAuroc, row.auroc);
    emit(row, MetricId::kFprAt95, row.fpr_at_95);
  }
  for (const auto& err : report.error_rates) {
    out << "top1-error," << report.id_dataset_name << ',' << err.who << ','
        << percent(err.error) << ",\n";
  }
}

}  // namespace oodeval
