#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oodeval/manifest.hpp"
#include "oodeval/simulate.hpp"

namespace oodeval {

/// A named population to simulate.
struct SimDatasetSpec {
  std::string name;
  SimConfig config;
};

/// Config-file form of a simulation run: one ID population plus any number
/// of OOD populations.
struct SimExperiment {
  SimDatasetSpec id_dataset;
  std::vector<SimDatasetSpec> ood_datasets;
};

/// Reads an experiment config (JSON: {"id": {...}, "ood": [{...}]}, each
/// dataset carrying name/classes/members/samples/signal_scale/member_noise/
/// class_mode/seed). Throws parse_error on malformed input.
SimExperiment load_sim_experiment(const std::filesystem::path& path);

/// Writes the experiment in the same format; loading it back reproduces the
/// experiment exactly.
void save_sim_experiment(const SimExperiment& experiment,
                         const std::filesystem::path& path);

/// The experiment a scenario name stands for: the named scenario as the OOD
/// population against an id-confident ID population, or an ID-only
/// experiment when the name is id-confident itself.
SimExperiment scenario_experiment(std::string_view name);

/// Simulates every dataset of the experiment, writes one logit CSV per
/// (dataset, member) and a ready manifest.json into out_dir, and returns the
/// written manifest. seed_override, when set, replaces every dataset's seed;
/// samples_override likewise for the sample counts.
Manifest run_simulate(const SimExperiment& experiment,
                      const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override = std::nullopt,
                      std::optional<std::size_t> samples_override = std::nullopt,
                      unsigned threads = 0);

}  // namespace oodeval
