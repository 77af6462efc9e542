// Acceptance suite: every release-gating check, one printed line each.
// Usage: acceptance <path-to-cli-binary> [workdir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oodeval/metrics.hpp"
#include "oodeval/noise.hpp"
#include "oodeval/scores.hpp"
#include "oodeval/simulate.hpp"
#include "reference_oracles.hpp"

namespace fs = std::filesystem;
using namespace oodeval;

namespace {

std::string g_cli_path;
fs::path g_workdir;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && pass) {
      pass = false;
      detail = message;
    }
  }
  void note(const std::string& message) {
    if (detail.empty()) detail = message;
  }
};

std::vector<ProbVector> random_ensemble(std::mt19937_64& rng, std::size_t m,
                                        std::size_t k) {
  std::normal_distribution<double> dist(0.0, 5.0);
  std::vector<ProbVector> probs;
  probs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> v(k);
    for (double& x : v) x = dist(rng);
    probs.push_back(stable_softmax(LogitVector(std::move(v))));
  }
  return probs;
}

DetectionSplit random_split(std::mt19937_64& rng, bool heavy_ties) {
  std::uniform_real_distribution<double> value(-4.0, 4.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double tie_weight = heavy_ties ? 0.8 : 0.15;
  DetectionSplit split;
  split.id_scores.resize(1 + rng() % 500);
  split.ood_scores.resize(1 + rng() % 500);
  const auto draw = [&] {
    double v = value(rng);
    if (coin(rng) < tie_weight) v = std::round(v * 2.0) / 2.0;
    return v;
  };
  for (double& v : split.id_scores) v = draw();
  for (double& v : split.ood_scores) v = draw();
  return split;
}

// ---- criteria ---------------------------------------------------------------

Outcome decomposition_identity() {
  Outcome out;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 1 + rng() % 10;
    const std::size_t k = 2 + rng() % 499;
    const auto probs = random_ensemble(rng, m, k);
    const double gap =
        std::abs(mutual_information(probs) - mutual_information_kl(probs));
    worst = std::max(worst, gap);
    if (gap >= 1e-10) {
      out.require(false, "gap " + std::to_string(gap) + " at trial " +
                             std::to_string(trial));
      return out;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max |mi - mi_kl| = %.3g", worst);
  out.note(buf);
  return out;
}

Outcome non_negativity_and_degeneracy() {
  Outcome out;
  std::mt19937_64 rng(102);
  double most_negative = 0.0;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto probs = random_ensemble(rng, 1 + rng() % 10, 2 + rng() % 499);
    const double mi = mutual_information(probs);
    most_negative = std::min(most_negative, mi);
    out.require(mi >= -1e-12, "negative mi " + std::to_string(mi));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto solo = random_ensemble(rng, 1, 2 + rng() % 499);
    out.require(std::abs(mutual_information(solo)) <= 1e-12,
                "nonzero mi for a single member");
    auto twins = random_ensemble(rng, 1, 2 + rng() % 499);
    const std::size_t copies = 2 + rng() % 7;
    std::vector<ProbVector> identical(copies, twins[0]);
    out.require(std::abs(mutual_information(identical)) <= 1e-12,
                "nonzero mi for identical members");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "most negative mi = %.3g", most_negative);
  out.note(buf);
  return out;
}

Outcome jensen_nll() {
  Outcome out;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> prob(0.001, 0.999);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 1 + rng() % 10;
    std::vector<double> probs(m);
    for (double& p : probs) p = prob(rng);
    const Detection truth = trial % 2 == 0 ? Detection::kOod : Detection::kId;
    const NllGap gap = ensemble_nll_gap(probs, truth);
    out.require(gap.ensemble_nll <= gap.average_nll + 1e-12,
                "ensemble nll above average at trial " + std::to_string(trial));
    const auto [lo, hi] = std::minmax_element(probs.begin(), probs.end());
    if (*hi - *lo > 1e-6) {
      out.require(gap.ensemble_nll < gap.average_nll,
                  "gap not strict at trial " + std::to_string(trial));
    }
  }
  return out;
}

Outcome auroc_oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(104);
  int tie_heavy = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool heavy = trial % 4 == 0;  // 25% of splits are tie-heavy
    tie_heavy += heavy ? 1 : 0;
    const DetectionSplit split = random_split(rng, heavy);
    const double fast = auroc(split);
    const double slow = auroc_pairwise_oracle(split);
    if (fast != slow) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "mismatch %.17g vs %.17g at trial %d",
                    fast, slow, trial);
      out.require(false, buf);
      return out;
    }
  }
  out.note(std::to_string(tie_heavy) + "/1000 splits tie-heavy, all bitwise equal");
  return out;
}

Outcome fpr_oracle_equivalence() {
  Outcome out;
  DetectionSplit worked;
  for (std::size_t i = 1; i <= 100; ++i) {
    worked.id_scores.push_back(static_cast<double>(i));
  }
  worked.ood_scores = {90.5, 95.5, 96.5, 100.5};
  out.require(fpr_at_95_tpr(worked) == 0.5, "worked example is not 0.5");

  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 1000; ++trial) {
    const DetectionSplit split = random_split(rng, trial % 3 == 0);
    const double fast = fpr_at_95_tpr(split);
    const double slow =
        refcalc::scan_fpr_at_95(split.id_scores, split.ood_scores);
    if (fast != slow) {
      out.require(false, "mismatch at trial " + std::to_string(trial));
      return out;
    }
  }
  return out;
}

double scenario_auroc(ScoreId score, const EnsembleBatch& id_batch,
                      const EnsembleBatch& ood_batch) {
  return auroc(DetectionSplit{score_batch(id_batch, score).values,
                              score_batch(ood_batch, score).values});
}

Outcome regime_weak_signal(const EnsembleBatch& id_batch,
                           const EnsembleBatch& ood_batch) {
  Outcome out;
  const double avg_h = scenario_auroc(ScoreId::kAvgEntropy, id_batch, ood_batch);
  const double mi = scenario_auroc(ScoreId::kMutualInfo, id_batch, ood_batch);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "auroc avg-entropy %.4f, mi %.4f", avg_h, mi);
  out.note(buf);
  out.require(avg_h >= 0.95, std::string("avg-entropy too weak: ") + buf);
  out.require(avg_h - mi >= 0.20, std::string("margin too small: ") + buf);
  return out;
}

Outcome regime_confident_disagreement(const EnsembleBatch& id_batch,
                                      const EnsembleBatch& ood_batch) {
  Outcome out;
  const double avg_h = scenario_auroc(ScoreId::kAvgEntropy, id_batch, ood_batch);
  const double mi = scenario_auroc(ScoreId::kMutualInfo, id_batch, ood_batch);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "auroc mi %.4f, avg-entropy %.4f", mi, avg_h);
  out.note(buf);
  out.require(mi - avg_h >= 0.10, std::string("margin too small: ") + buf);
  return out;
}

Outcome energy_properties() {
  Outcome out;
  std::mt19937_64 rng(106);
  std::normal_distribution<double> logit(0.0, 5.0);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t k = 2 + rng() % 299;
    std::vector<double> v(k);
    for (double& x : v) x = logit(rng);
    const double c = shift(rng);
    std::vector<double> moved = v;
    for (double& x : moved) x += c;
    const double gap = std::abs(energy_uncertainty(LogitVector(moved)) -
                                (energy_uncertainty(LogitVector(v)) - c));
    out.require(gap <= 1e-12,
                "shift identity off by " + std::to_string(gap));
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 10;
    const std::size_t k = 2 + rng() % 299;
    std::vector<LogitVector> members;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> v(k);
      for (double& x : v) x = logit(rng);
      sum += refcalc::compensated_energy(v);
      members.emplace_back(std::move(v));
    }
    const double want = static_cast<double>(sum / static_cast<long double>(m));
    out.require(std::abs(average_energy(members) - want) <= 1e-10,
                "average energy off the per-member reference");
  }
  return out;
}

Outcome noise_generator_statistics() {
  Outcome out;
  const CounterRng rng(1);

  // sigma moments
  long double sum = 0.0L;
  for (std::size_t i = 0; i < 1000000; ++i) sum += sample_sigma(rng, i);
  const double mean = static_cast<double>(sum / 1000000.0L);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sigma mean %.4f over 1e6 draws", mean);
  out.note(buf);
  out.require(std::abs(mean - 1.0) <= 0.01, std::string("sigma mean: ") + buf);

  // sigma = 0 renders uniform mid-gray
  const NoiseField flat = render_noise_field(rng, 0, 31, 0.0);
  for (std::uint8_t v : flat.image.rgb) {
    out.require(v == 128, "sigma=0 image not uniformly 128");
  }
  const NoiseImage flat_big = lanczos_resize(flat.image, 256);
  for (std::uint8_t v : flat_big.rgb) {
    out.require(v == 128, "resized sigma=0 image not uniformly 128");
  }

  // 1000 images: all 256x256, regeneration is bit-identical
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const NoiseImage img = generate_noise_image(rng, i, 256);
    out.require(img.width == 256 && img.height == 256 &&
                    img.rgb.size() == 256u * 256u * 3u,
                "image " + std::to_string(i) + " has the wrong shape");
    if (i % 100 == 0) {
      const NoiseImage again = generate_noise_image(rng, i, 256);
      out.require(img.rgb == again.rgb,
                  "image " + std::to_string(i) + " not reproducible");
    }
    if (!out.pass) return out;
  }
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome end_to_end_determinism() {
  Outcome out;
  const fs::path dir = g_workdir / "e2e";
  fs::create_directories(dir);
  const fs::path config = dir / "experiment.json";
  std::ofstream(config) << R"({
    "id":  {"name": "base", "classes": 50, "members": 3, "samples": 2000,
            "signal_scale": 7.0, "member_noise": 1.0,
            "class_mode": "shared-class", "seed": 4},
    "ood": [{"name": "drift", "classes": 50, "members": 3, "samples": 2000,
             "signal_scale": 0.4, "member_noise": 0.3,
             "class_mode": "shared-class", "seed": 4}]
  })";

  const fs::path sim = dir / "sim";
  const fs::path report = dir / "report.csv";
  const std::string simulate_cmd = "simulate --config " + config.string() +
                                   " --seed 31 --out-dir " + sim.string();
  const std::string eval_cmd = "eval --manifest " +
                               (sim / "manifest.json").string() +
                               " --scores mi,avg-entropy,avg-energy,msp,energy"
                               " --out " + report.string();

  std::vector<std::string> reports;
  std::vector<std::string> logit_files;
  for (const std::string threads : {"1", "1", "6"}) {
    const std::string prefix = "--threads " + threads + " ";
    if (run_cli(prefix + simulate_cmd) != 0 || run_cli(prefix + eval_cmd) != 0) {
      out.require(false, "pipeline command failed");
      return out;
    }
    reports.push_back(slurp(report));
    logit_files.push_back(slurp(sim / "drift_member_2.csv"));
  }
  out.require(!reports[0].empty(), "empty report");
  out.require(reports[0] == reports[1], "reruns with identical flags differ");
  out.require(reports[0] == reports[2], "thread count changed the report");
  out.require(logit_files[0] == logit_files[1] &&
                  logit_files[0] == logit_files[2],
              "simulated logit files differ across runs");
  out.note("3 pipeline runs, byte-identical reports and logits");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary> [workdir]\n", argv[0]);
    return 2;
  }
  g_cli_path = argv[1];
  g_workdir = argc > 2 ? fs::path(argv[2])
                       : fs::temp_directory_path() / "oodeval_acceptance";
  fs::remove_all(g_workdir);
  fs::create_directories(g_workdir);

  struct Criterion {
    std::string name;
    double time_limit_s;
    std::function<Outcome()> run;
  };

  // shared scenario batches for the two regime criteria
  SimConfig id_config = make_scenario("id-confident");
  SimConfig weak_config = make_scenario("ood-high-avh");
  SimConfig disagree_config = make_scenario("ood-confident-disagreement");
  id_config.seed = weak_config.seed = disagree_config.seed = 1;
  id_config.num_samples = weak_config.num_samples =
      disagree_config.num_samples = 10000;

  EnsembleBatch id_batch = simulate_batch(id_config);
  EnsembleBatch weak_batch = simulate_batch(weak_config);
  EnsembleBatch disagree_batch = simulate_batch(disagree_config);

  const std::vector<Criterion> criteria = {
      {"decomposition identity (two mutual-information routes)", 30.0,
       decomposition_identity},
      {"mutual information non-negativity and degeneracy", 0.0,
       non_negativity_and_degeneracy},
      {"ensemble NLL never exceeds the member average (Jensen)", 0.0,
       jensen_nll},
      {"fast AUROC equals the pairwise enumeration bitwise", 60.0,
       auroc_oracle_equivalence},
      {"FPR@95 equals the exhaustive threshold scan", 0.0,
       fpr_oracle_equivalence},
      {"weak-signal regime: average entropy beats mutual information", 60.0,
       [&] { return regime_weak_signal(id_batch, weak_batch); }},
      {"confident-disagreement regime: mutual information wins", 60.0,
       [&] { return regime_confident_disagreement(id_batch, disagree_batch); }},
      {"energy shift identity and ensemble average", 0.0, energy_properties},
      {"noise generator statistics and determinism", 120.0,
       noise_generator_statistics},
      {"simulate + eval pipeline is byte-deterministic", 0.0,
       end_to_end_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criteria[i].run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criteria[i].time_limit_s > 0.0 && elapsed > criteria[i].time_limit_s) {
      outcome.pass = false;
      outcome.detail = "exceeded " + std::to_string(criteria[i].time_limit_s) +
                       " s time limit";
    }
    std::printf("[%s] %2zu. %s (%.1f s)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name.c_str(), elapsed,
                outcome.detail.empty() ? "" : " -- ",
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria hold\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
