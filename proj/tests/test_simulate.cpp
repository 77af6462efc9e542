#include <doctest.h>

#include <cmath>

#include "oodeval/errors.hpp"
#include "oodeval/metrics.hpp"
#include "oodeval/simulate.hpp"

using namespace oodeval;

namespace {

bool batches_identical(const EnsembleBatch& a, const EnsembleBatch& b) {
  if (a.num_members() != b.num_members()) return false;
  if (a.num_samples() != b.num_samples()) return false;
  if (a.sample_ids() != b.sample_ids()) return false;
  for (std::size_t m = 0; m < a.num_members(); ++m) {
    for (std::size_t n = 0; n < a.num_samples(); ++n) {
      const auto va = a.member(m).row(n).values();
      const auto vb = b.member(m).row(n).values();
      for (std::size_t k = 0; k < va.size(); ++k) {
        if (va[k] != vb[k]) return false;
      }
    }
  }
  return true;
}

double mean_score(const EnsembleBatch& batch, ScoreId id) {
  const ScoreSeries series = score_batch(batch, id);
  double sum = 0.0;
  for (double v : series.values) sum += v;
  return sum / static_cast<double>(series.values.size());
}

double standard_error(const ScoreSeries& series) {
  double sum = 0.0;
  for (double v : series.values) sum += v;
  const double mu = sum / static_cast<double>(series.values.size());
  double var = 0.0;
  for (double v : series.values) var += (v - mu) * (v - mu);
  var /= static_cast<double>(series.values.size());
  return std::sqrt(var / static_cast<double>(series.values.size()));
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig config;
  CHECK_NOTHROW(validate(config));
  config.num_classes = 1;
  CHECK_THROWS_AS(validate(config), invalid_input_error);
  config = SimConfig{};
  config.num_members = 0;
  CHECK_THROWS_AS(validate(config), invalid_input_error);
  config = SimConfig{};
  config.num_samples = 0;
  CHECK_THROWS_AS(validate(config), invalid_input_error);
  config = SimConfig{};
  config.signal_scale = -1.0;
  CHECK_THROWS_AS(validate(config), invalid_input_error);
  config = SimConfig{};
  config.member_noise = -0.5;
  CHECK_THROWS_AS(validate(config), invalid_input_error);
}

TEST_CASE("noise-free shared signal makes identical members") {
  SimConfig config;
  config.num_classes = 16;
  config.num_members = 4;
  config.num_samples = 50;
  config.signal_scale = 10.0;
  config.member_noise = 0.0;
  config.seed = 9;
  const EnsembleBatch batch = simulate_batch(config);
  for (std::size_t n = 0; n < batch.num_samples(); ++n) {
    std::vector<ProbVector> probs;
    for (std::size_t m = 0; m < 4; ++m) {
      const auto va = batch.member(0).row(n).values();
      const auto vm = batch.member(m).row(n).values();
      for (std::size_t k = 0; k < va.size(); ++k) CHECK(va[k] == vm[k]);
      probs.push_back(stable_softmax(batch.member(m).row(n)));
    }
    CHECK(std::abs(mutual_information(probs)) < 1e-12);
  }
}

TEST_CASE("zero signal and zero noise gives uniform batches") {
  SimConfig config;
  config.num_classes = 32;
  config.num_members = 3;
  config.num_samples = 20;
  config.signal_scale = 0.0;
  config.member_noise = 0.0;
  const EnsembleBatch batch = simulate_batch(config);
  for (std::size_t n = 0; n < batch.num_samples(); ++n) {
    std::vector<ProbVector> probs;
    for (std::size_t m = 0; m < 3; ++m) {
      for (double v : batch.member(m).row(n).values()) CHECK(v == 0.0);
      probs.push_back(stable_softmax(batch.member(m).row(n)));
    }
    CHECK(std::abs(average_entropy(probs) - std::log(32.0)) < 1e-12);
    CHECK(std::abs(mutual_information(probs)) < 1e-12);
  }
}

TEST_CASE("same seed, same batch, at any thread count") {
  SimConfig config;
  config.num_classes = 20;
  config.num_members = 3;
  config.num_samples = 257;
  config.signal_scale = 2.0;
  config.member_noise = 1.5;
  config.seed = 1234;
  const EnsembleBatch a = simulate_batch(config, 1);
  const EnsembleBatch b = simulate_batch(config, 1);
  const EnsembleBatch c = simulate_batch(config, 7);
  CHECK(batches_identical(a, b));
  CHECK(batches_identical(a, c));

  config.seed = 1235;
  const EnsembleBatch d = simulate_batch(config, 1);
  CHECK(!batches_identical(a, d));
}

TEST_CASE("labels carry the signal class") {
  SimConfig config;
  config.num_classes = 8;
  config.num_members = 2;
  config.num_samples = 100;
  config.signal_scale = 50.0;
  config.member_noise = 0.1;
  const EnsembleBatch batch = simulate_batch(config);
  REQUIRE(batch.member(0).labels());
  const auto& labels = *batch.member(0).labels();
  for (std::size_t n = 0; n < batch.num_samples(); ++n) {
    const auto row = batch.member(0).row(n).values();
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k] > row[best]) best = k;
    }
    CHECK(best == labels[n]);  // strong signal dominates the noise
  }
}

TEST_CASE("scenario presets") {
  CHECK(make_scenario("ood-high-avh").signal_scale == 0.5);
  CHECK(make_scenario("id-confident").class_mode == ClassMode::kSharedClass);
  CHECK(make_scenario("ood-confident-disagreement").class_mode ==
        ClassMode::kPerMemberClass);
  for (const auto name : scenario_names()) {
    const SimConfig config = make_scenario(name);
    CHECK(config.num_classes == 200);
    CHECK(config.num_members == 5);
  }
  CHECK_THROWS_AS(make_scenario("imagenet-o"), invalid_input_error);
}

TEST_CASE("average entropy falls as the signal grows") {
  SimConfig config;
  config.num_classes = 200;
  config.num_members = 5;
  config.num_samples = 10000;
  config.member_noise = 1.0;
  config.seed = 77;

  double previous_mean = 0.0;
  double previous_se = 0.0;
  bool first = true;
  for (double mu : {0.0, 2.0, 4.0, 8.0}) {
    config.signal_scale = mu;
    const EnsembleBatch batch = simulate_batch(config);
    const ScoreSeries series = score_batch(batch, ScoreId::kAvgEntropy);
    const double se = standard_error(series);
    const double mean = mean_score(batch, ScoreId::kAvgEntropy);
    if (!first) {
      const double margin = 3.0 * std::sqrt(se * se + previous_se * previous_se);
      CHECK(mean < previous_mean - margin);
    }
    previous_mean = mean;
    previous_se = se;
    first = false;
  }
}

TEST_CASE("scenario regimes reorder the scores (smoke size)") {
  const std::size_t n = 2000;
  SimConfig id_config = make_scenario("id-confident");
  id_config.num_samples = n;
  SimConfig high_avh = make_scenario("ood-high-avh");
  high_avh.num_samples = n;
  SimConfig disagree = make_scenario("ood-confident-disagreement");
  disagree.num_samples = n;

  const EnsembleBatch id_batch = simulate_batch(id_config);
  const EnsembleBatch avh_batch = simulate_batch(high_avh);
  const EnsembleBatch dis_batch = simulate_batch(disagree);

  const auto auroc_of = [&](ScoreId score, const EnsembleBatch& ood) {
    return auroc(DetectionSplit{score_batch(id_batch, score).values,
                                score_batch(ood, score).values});
  };

  // weak-signal regime: average entropy wins, mutual information fails
  CHECK(auroc_of(ScoreId::kAvgEntropy, avh_batch) >
        auroc_of(ScoreId::kMutualInfo, avh_batch) + 0.2);
  // confident-disagreement regime: mutual information wins
  CHECK(auroc_of(ScoreId::kMutualInfo, dis_batch) >
        auroc_of(ScoreId::kAvgEntropy, dis_batch) + 0.1);
}
