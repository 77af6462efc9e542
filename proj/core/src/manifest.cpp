#include "oodeval/manifest.hpp"

#include <fstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "oodeval/csv.hpp"
#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

using nlohmann::json;

const json& require_key(const json& node, const char* key,
                        const std::filesystem::path& path) {
  const auto it = node.find(key);
  if (it == node.end()) {
    throw parse_error(path.string() + ": missing key '" + key + "'");
  }
  return *it;
}

DatasetRef parse_dataset(const json& node, const std::filesystem::path& path) {
  DatasetRef ref;
  ref.name = require_key(node, "name", path).get<std::string>();
  for (const auto& file : require_key(node, "files", path)) {
    ref.files.emplace_back(file.get<std::string>());
  }
  return ref;
}

void check_dataset_shape(const DatasetRef& dataset, std::size_t members,
                         const std::filesystem::path& path) {
  if (dataset.files.size() != members) {
    throw parse_error(path.string() + ": dataset '" + dataset.name + "' has " +
                      std::to_string(dataset.files.size()) + " files, expected " +
                      std::to_string(members) + " (one per member)");
  }
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw parse_error(path.string() + ": " + e.what());
  }

  Manifest manifest;
  manifest.base_dir = path.parent_path();
  const auto& classes = require_key(root, "classes", path);
  if (!classes.is_number_unsigned() || classes.get<std::size_t>() < 2) {
    throw parse_error(path.string() + ": 'classes' must be an integer >= 2");
  }
  manifest.num_classes = classes.get<std::size_t>();

  for (const auto& member : require_key(root, "ensemble", path)) {
    manifest.members.push_back(member.get<std::string>());
  }
  if (manifest.members.empty()) {
    throw parse_error(path.string() + ": 'ensemble' must list at least one member");
  }

  manifest.id_dataset = parse_dataset(require_key(root, "id_dataset", path), path);
  for (const auto& node : require_key(root, "ood_datasets", path)) {
    manifest.ood_datasets.push_back(parse_dataset(node, path));
  }

  check_dataset_shape(manifest.id_dataset, manifest.members.size(), path);
  std::unordered_set<std::string> names{manifest.id_dataset.name};
  for (const auto& dataset : manifest.ood_datasets) {
    check_dataset_shape(dataset, manifest.members.size(), path);
    if (!names.insert(dataset.name).second) {
      throw parse_error(path.string() + ": duplicate dataset name '" +
                        dataset.name + "'");
    }
  }

  // Data pass: every referenced file must parse, share the declared class
  // count, and align by sample id within its dataset.
  load_dataset(manifest, manifest.id_dataset);
  for (const auto& dataset : manifest.ood_datasets) {
    load_dataset(manifest, dataset);
  }
  return manifest;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  json root;
  root["classes"] = manifest.num_classes;
  root["ensemble"] = manifest.members;
  const auto dataset_json = [](const DatasetRef& ref) {
    json node;
    node["name"] = ref.name;
    json files = json::array();
    for (const auto& file : ref.files) files.push_back(file.generic_string());
    node["files"] = files;
    return node;
  };
  root["id_dataset"] = dataset_json(manifest.id_dataset);
  json oods = json::array();
  for (const auto& dataset : manifest.ood_datasets) {
    oods.push_back(dataset_json(dataset));
  }
  root["ood_datasets"] = oods;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw parse_error("cannot open " + path.string() + " for writing");
  out << root.dump(2) << '\n';
}

EnsembleBatch load_dataset(const Manifest& manifest, const DatasetRef& dataset) {
  std::vector<LogitMatrix> members;
  members.reserve(dataset.files.size());
  for (const auto& file : dataset.files) {
    const auto resolved = file.is_absolute() ? file : manifest.base_dir / file;
    LogitMatrix matrix = load_logits_csv(resolved);
    if (matrix.num_classes() != manifest.num_classes) {
      throw parse_error(resolved.string() + ": has " +
                        std::to_string(matrix.num_classes()) +
                        " classes, manifest declares " +
                        std::to_string(manifest.num_classes));
    }
    members.push_back(std::move(matrix));
  }
  try {
    return EnsembleBatch(std::move(members));
  } catch (const invalid_input_error& e) {
    throw parse_error("dataset '" + dataset.name + "': " + e.what());
  }
}

}  // namespace oodeval
