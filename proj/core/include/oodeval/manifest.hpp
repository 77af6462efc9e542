#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oodeval/scores.hpp"

namespace oodeval {

/// One dataset: a name plus one logit file per ensemble member, in member
/// order.
struct DatasetRef {
  std::string name;
  std::vector<std::filesystem::path> files;
};

/// Experiment layout: the ensemble members, one ID dataset and any number of
/// OOD datasets. Relative file paths resolve against base_dir (the directory
/// the manifest was loaded from).
struct Manifest {
  std::size_t num_classes = 0;
  std::vector<std::string> members;  // member labels; defines M and order
  DatasetRef id_dataset;
  std::vector<DatasetRef> ood_datasets;
  std::filesystem::path base_dir;
};

/// Loads and fully validates a manifest (JSON): required keys, exactly M
/// files per dataset, unique dataset names, and then the referenced logit
/// files themselves (shared class count matching `classes`, identical sample
/// ids across members). Throws parse_error on structural problems.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes the manifest as JSON with paths relative to its directory.
void save_manifest(const Manifest& manifest,
                   const std::filesystem::path& path);

/// Loads one dataset of the manifest as an aligned ensemble batch.
EnsembleBatch load_dataset(const Manifest& manifest, const DatasetRef& dataset);

}  // namespace oodeval
