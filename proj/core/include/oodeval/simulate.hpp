#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "oodeval/scores.hpp"

namespace oodeval {

/// Whether every ensemble member boosts the same signal class or each member
/// boosts its own independently drawn class.
enum class ClassMode { kSharedClass, kPerMemberClass };

std::string_view to_string(ClassMode mode);

/// Parametric generative model of ensemble logits: each member sees
/// signal_scale on its signal class plus iid gaussian member noise.
struct SimConfig {
  std::size_t num_classes = 200;       // K
  std::size_t num_members = 5;         // M
  std::size_t num_samples = 10000;
  double signal_scale = 1.0;           // logit magnitude of the class signal
  double member_noise = 1.0;           // stddev of per-member perturbations
  ClassMode class_mode = ClassMode::kSharedClass;
  std::uint64_t seed = 1;
};

/// Throws invalid_input_error on K < 2, M < 1, n < 1, or negative scales.
void validate(const SimConfig& config);

/// Draws an ensemble batch from the generative model. Counter-based
/// randomness: identical configs give identical batches at any thread count.
/// Sample labels carry the signal class draw.
EnsembleBatch simulate_batch(const SimConfig& config, unsigned threads = 0);

/// Names of the built-in scenario presets:
/// "id-confident", "ood-high-avh", "ood-confident-disagreement".
std::vector<std::string_view> scenario_names();

/// Preset config for a named scenario; throws invalid_input_error for
/// unknown names.
///
/// id-confident             strong shared signal, members agree and are sure
/// ood-high-avh             weak shared signal, members agree on being unsure
/// ood-confident-disagreement  strong signal but each member picks its own
///                             class, so members are sure and disagree
SimConfig make_scenario(std::string_view name);

}  // namespace oodeval
