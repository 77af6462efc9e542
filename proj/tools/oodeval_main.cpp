// Command-line frontend: score / eval / simulate / noisegen / analyze.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error,
// 3 numeric-contract violation.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oodeval/csv.hpp"
#include "oodeval/errors.hpp"
#include "oodeval/evaluate.hpp"
#include "oodeval/histogram.hpp"
#include "oodeval/manifest.hpp"
#include "oodeval/noise.hpp"
#include "oodeval/scores.hpp"
#include "oodeval/simio.hpp"

namespace {

using namespace oodeval;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(list.substr(start));
      break;
    }
    out.push_back(list.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::vector<ScoreId> parse_scores(const std::string& list) {
  std::vector<ScoreId> ids;
  for (const auto& name : split_list(list)) {
    const auto id = parse_score_id(name);
    if (!id) throw usage_error("unknown score '" + name + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) throw usage_error("empty score list");
  return ids;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw parse_error("cannot open " + path + " for writing");
  return out;
}

// ---- score ----------------------------------------------------------------

void run_score_command(const std::string& manifest_path,
                       const std::string& score_list, const std::string& out_path,
                       std::optional<std::size_t> member) {
  const std::vector<ScoreId> scores = parse_scores(score_list);
  const Manifest manifest = load_manifest(manifest_path);
  if (!member && manifest.members.size() > 1) {
    for (ScoreId id : scores) {
      if (is_single_model_score(id)) {
        throw usage_error("score '" + std::string(to_string(id)) +
                          "' is single-model; pass --member for an ensemble "
                          "of " + std::to_string(manifest.members.size()));
      }
    }
  }
  if (member && *member >= manifest.members.size()) {
    throw usage_error("--member " + std::to_string(*member) +
                      " out of range for " +
                      std::to_string(manifest.members.size()) + " members");
  }

  auto out = open_output(out_path);
  out << "sample_id,dataset,score_id,value\n";
  const auto emit = [&](const DatasetRef& dataset) {
    const EnsembleBatch batch = load_dataset(manifest, dataset);
    for (ScoreId id : scores) {
      const ScoreSeries series =
          score_batch(batch, id, is_single_model_score(id) ? member : std::nullopt);
      for (std::size_t n = 0; n < series.values.size(); ++n) {
        out << series.sample_ids[n] << ',' << dataset.name << ','
            << to_string(id) << ',' << format_double(series.values[n]) << '\n';
      }
    }
  };
  emit(manifest.id_dataset);
  for (const auto& dataset : manifest.ood_datasets) emit(dataset);
}

// ---- eval -----------------------------------------------------------------

void run_eval_command(const std::string& manifest_path,
                      const std::string& score_list,
                      const std::string& out_path) {
  const std::vector<ScoreId> scores = parse_scores(score_list);
  const Manifest manifest = load_manifest(manifest_path);
  const MetricReport report = run_eval(manifest, scores, all_metric_ids());
  auto out = open_output(out_path);
  write_report_csv(report, out);
}

// ---- simulate ---------------------------------------------------------------

void run_simulate_command(const std::string& scenario, const std::string& config,
                          std::uint64_t seed, const std::string& out_dir,
                          std::optional<std::size_t> samples, unsigned threads) {
  SimExperiment experiment;
  if (!scenario.empty()) {
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end()) {
      throw usage_error("unknown scenario '" + scenario + "'");
    }
    experiment = scenario_experiment(scenario);
  } else {
    experiment = load_sim_experiment(config);
  }
  run_simulate(experiment, out_dir, seed, samples, threads);
}

// ---- noisegen ---------------------------------------------------------------

void run_noisegen_command(std::size_t n, std::uint64_t seed,
                          const std::string& out_dir, int size,
                          unsigned threads) {
  generate_noise_dataset(NoiseGenConfig{n, seed, size}, out_dir, threads);
}

// ---- analyze ----------------------------------------------------------------

struct ScoreFileRow {
  std::string sample_id;
  std::string dataset;
  std::string score_id;
  double value;
};

std::vector<ScoreFileRow> read_score_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw parse_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "sample_id,dataset,score_id,value") {
    throw parse_error(path + ": line 1: unexpected header '" + line + "'");
  }
  std::vector<ScoreFileRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_list(line);
    if (fields.size() != 4) {
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ": expected 4 fields");
    }
    double value = 0.0;
    try {
      value = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ": non-numeric value '" + fields[3] + "'");
    }
    rows.push_back(ScoreFileRow{fields[0], fields[1], fields[2], value});
  }
  return rows;
}

bool entropy_scaled(const std::string& score_name) {
  return score_name == "entropy" || score_name == "ens-entropy" ||
         score_name == "avg-entropy" || score_name == "mi";
}

void run_analyze_command(const std::string& scores_path, const std::string& x_name,
                         const std::string& y_name, std::size_t bins,
                         const std::string& out_path,
                         std::optional<std::size_t> classes) {
  if (!parse_score_id(x_name)) throw usage_error("unknown score '" + x_name + "'");
  if (!parse_score_id(y_name)) throw usage_error("unknown score '" + y_name + "'");
  if (bins < 1) throw usage_error("--bins must be at least 1");
  const auto rows = read_score_csv(scores_path);

  // Series per dataset, preserving dataset order of first appearance.
  std::vector<std::string> dataset_order;
  std::map<std::string, ScoreSeries> x_series, y_series;
  for (const auto& row : rows) {
    if (std::find(dataset_order.begin(), dataset_order.end(), row.dataset) ==
        dataset_order.end()) {
      dataset_order.push_back(row.dataset);
    }
    if (row.score_id != x_name && row.score_id != y_name) continue;
    const auto append = [&](std::map<std::string, ScoreSeries>& series) {
      auto [it, inserted] = series.emplace(
          row.dataset, ScoreSeries{*parse_score_id(row.score_id), {}, {}});
      it->second.sample_ids.push_back(row.sample_id);
      it->second.values.push_back(row.value);
    };
    if (row.score_id == x_name) append(x_series);
    if (row.score_id == y_name) append(y_series);
  }

  // Shared axes across datasets: [0, ln K] for entropy-scaled variables when
  // K is known, otherwise the pooled data range.
  const auto make_axis = [&](const std::string& name,
                             const std::map<std::string, ScoreSeries>& series) {
    if (classes && entropy_scaled(name)) {
      return uniform_axis(name, 0.0, std::log(static_cast<double>(*classes)),
                          bins);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [dataset, s] : series) {
      for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!(lo < hi)) {
      lo -= 0.5;
      hi += 0.5;
    }
    return uniform_axis(name, lo, hi, bins);
  };

  if (x_series.empty() || y_series.empty()) {
    throw parse_error(scores_path + ": no rows for '" + x_name + "' and '" +
                      y_name + "'");
  }
  const BinAxis x_axis = make_axis(x_name, x_series);
  const BinAxis y_axis = make_axis(y_name, y_series);

  auto out = open_output(out_path);
  bool first = true;
  for (const auto& dataset : dataset_order) {
    const auto x_it = x_series.find(dataset);
    const auto y_it = y_series.find(dataset);
    if (x_it == x_series.end() || y_it == y_series.end()) {
      throw parse_error(scores_path + ": dataset '" + dataset +
                        "' lacks series for both '" + x_name + "' and '" +
                        y_name + "'");
    }
    const auto conditional =
        conditional_histogram(x_it->second, y_it->second, x_axis, y_axis);
    const auto joint =
        joint_histogram2d(x_it->second, y_it->second, x_axis, y_axis);
    write_histogram_csv(conditional, dataset, out, first);
    first = false;
    write_histogram_csv(joint, dataset, out, false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-score OOD detection toolkit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "worker threads for generation (0 = hardware)");

  // score
  auto* score_cmd = app.add_subcommand("score", "compute per-sample scores");
  std::string score_manifest, score_list, score_out;
  std::optional<std::size_t> member;
  score_cmd->add_option("--manifest", score_manifest, "manifest path")->required();
  score_cmd->add_option("--scores", score_list, "comma-separated score ids")->required();
  score_cmd->add_option("--out", score_out, "output CSV")->required();
  score_cmd->add_option("--member", member, "member index for single-model scores");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "AUROC / FPR@95 report");
  std::string eval_manifest, eval_scores, eval_out;
  eval_cmd->add_option("--manifest", eval_manifest, "manifest path")->required();
  eval_cmd->add_option("--scores", eval_scores, "comma-separated score ids")->required();
  eval_cmd->add_option("--out", eval_out, "output CSV")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate ensemble logits");
  std::string scenario, sim_config, sim_out_dir;
  std::uint64_t sim_seed = 0;
  std::optional<std::size_t> sim_samples;
  auto* scenario_opt = sim_cmd->add_option("--scenario", scenario,
                                           "preset scenario name");
  sim_cmd->add_option("--config", sim_config, "experiment config JSON")
      ->excludes(scenario_opt);
  sim_cmd->add_option("--seed", sim_seed, "seed for every dataset")->required();
  sim_cmd->add_option("--out-dir", sim_out_dir, "output directory")->required();
  sim_cmd->add_option("--samples", sim_samples, "override sample count");

  // noisegen
  auto* noise_cmd = app.add_subcommand("noisegen", "generate noise images");
  std::size_t noise_n = 0;
  std::uint64_t noise_seed = 0;
  std::string noise_out_dir;
  int noise_size = 256;
  noise_cmd->add_option("--n", noise_n, "image count")->required();
  noise_cmd->add_option("--seed", noise_seed, "seed")->required();
  noise_cmd->add_option("--out-dir", noise_out_dir, "output directory")->required();
  noise_cmd->add_option("--size", noise_size, "output side length");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "histogram exports");
  std::string an_scores, an_x, an_y, an_out;
  std::size_t an_bins = 25;
  std::optional<std::size_t> an_classes;
  analyze_cmd->add_option("--scores", an_scores, "scores CSV from 'score'")->required();
  analyze_cmd->add_option("--x", an_x, "x variable score id")->required();
  analyze_cmd->add_option("--y", an_y, "y variable score id")->required();
  analyze_cmd->add_option("--bins", an_bins, "bins per axis");
  analyze_cmd->add_option("--out", an_out, "output CSV")->required();
  analyze_cmd->add_option("--classes", an_classes,
                          "class count; entropy-scaled axes then span [0, ln K]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (score_cmd->parsed()) {
      run_score_command(score_manifest, score_list, score_out, member);
    } else if (eval_cmd->parsed()) {
      run_eval_command(eval_manifest, eval_scores, eval_out);
    } else if (sim_cmd->parsed()) {
      if (scenario.empty() && sim_config.empty()) {
        throw usage_error("simulate needs --scenario or --config");
      }
      run_simulate_command(scenario, sim_config, sim_seed, sim_out_dir,
                           sim_samples, threads);
    } else if (noise_cmd->parsed()) {
      run_noisegen_command(noise_n, noise_seed, noise_out_dir, noise_size,
                           threads);
    } else if (analyze_cmd->parsed()) {
      run_analyze_command(an_scores, an_x, an_y, an_bins, an_out, an_classes);
    }
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const parse_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const invalid_input_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
