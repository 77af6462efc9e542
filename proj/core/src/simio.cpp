#include "oodeval/simio.hpp"

#include <fstream>

#include <json.hpp>

#include "oodeval/csv.hpp"
#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

using nlohmann::json;

SimDatasetSpec parse_spec(const json& node, const std::filesystem::path& path) {
  const auto get = [&](const char* key) -> const json& {
    const auto it = node.find(key);
    if (it == node.end()) {
      throw parse_error(path.string() + ": missing key '" + key + "'");
    }
    return *it;
  };
  SimDatasetSpec spec;
  spec.name = get("name").get<std::string>();
  spec.config.num_classes = get("classes").get<std::size_t>();
  spec.config.num_members = get("members").get<std::size_t>();
  spec.config.num_samples = get("samples").get<std::size_t>();
  spec.config.signal_scale = get("signal_scale").get<double>();
  spec.config.member_noise = get("member_noise").get<double>();
  const auto mode = get("class_mode").get<std::string>();
  if (mode == "shared-class") {
    spec.config.class_mode = ClassMode::kSharedClass;
  } else if (mode == "per-member-class") {
    spec.config.class_mode = ClassMode::kPerMemberClass;
  } else {
    throw parse_error(path.string() + ": unknown class_mode '" + mode + "'");
  }
  spec.config.seed = get("seed").get<std::uint64_t>();
  try {
    validate(spec.config);
  } catch (const invalid_input_error& e) {
    throw parse_error(path.string() + ": dataset '" + spec.name + "': " +
                      e.what());
  }
  return spec;
}

}  // namespace

SimExperiment load_sim_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
  const auto id_it = root.find("id");
  if (id_it == root.end()) {
    throw parse_error(path.string() + ": missing key 'id'");
  }
  SimExperiment experiment;
  experiment.id_dataset = parse_spec(*id_it, path);
  if (const auto ood_it = root.find("ood"); ood_it != root.end()) {
    for (const auto& node : *ood_it) {
      experiment.ood_datasets.push_back(parse_spec(node, path));
    }
  }
  for (const auto& ood : experiment.ood_datasets) {
    if (ood.config.num_classes != experiment.id_dataset.config.num_classes ||
        ood.config.num_members != experiment.id_dataset.config.num_members) {
      throw parse_error(path.string() + ": dataset '" + ood.name +
                        "' disagrees with the ID dataset on classes or members");
    }
  }
  return experiment;
}

void save_sim_experiment(const SimExperiment& experiment,
                         const std::filesystem::path& path) {
  const auto spec_json = [](const SimDatasetSpec& spec) {
    json node;
    node["name"] = spec.name;
    node["classes"] = spec.config.num_classes;
    node["members"] = spec.config.num_members;
    node["samples"] = spec.config.num_samples;
    node["signal_scale"] = spec.config.signal_scale;
    node["member_noise"] = spec.config.member_noise;
    node["class_mode"] = std::string(to_string(spec.config.class_mode));
    node["seed"] = spec.config.seed;
    return node;
  };
  json root;
  root["id"] = spec_json(experiment.id_dataset);
  json oods = json::array();
  for (const auto& spec : experiment.ood_datasets) {
    oods.push_back(spec_json(spec));
  }
  root["ood"] = oods;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw parse_error("cannot open " + path.string() + " for writing");
  out << root.dump(2) << '\n';
}

SimExperiment scenario_experiment(std::string_view name) {
  SimExperiment experiment;
  experiment.id_dataset = {"id-confident", make_scenario("id-confident")};
  if (name != "id-confident") {
    experiment.ood_datasets.push_back(
        {std::string(name), make_scenario(name)});
  }
  return experiment;
}

Manifest run_simulate(const SimExperiment& experiment,
                      const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override,
                      std::optional<std::size_t> samples_override,
                      unsigned threads) {
  std::filesystem::create_directories(out_dir);

  Manifest manifest;
  manifest.base_dir = out_dir;
  manifest.num_classes = experiment.id_dataset.config.num_classes;
  for (std::size_t m = 0; m < experiment.id_dataset.config.num_members; ++m) {
    manifest.members.push_back("member_" + std::to_string(m));
  }

  const auto write_dataset = [&](const SimDatasetSpec& spec) {
    SimConfig config = spec.config;
    if (seed_override) config.seed = *seed_override;
    if (samples_override) config.num_samples = *samples_override;
    const EnsembleBatch batch = simulate_batch(config, threads);
    DatasetRef ref;
    ref.name = spec.name;
    for (std::size_t m = 0; m < batch.num_members(); ++m) {
      const std::string file = spec.name + "_member_" + std::to_string(m) + ".csv";
      save_logits_csv(batch.member(m), out_dir / file);
      ref.files.emplace_back(file);
    }
    return ref;
  };

  manifest.id_dataset = write_dataset(experiment.id_dataset);
  for (const auto& spec : experiment.ood_datasets) {
    manifest.ood_datasets.push_back(write_dataset(spec));
  }
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace oodeval
