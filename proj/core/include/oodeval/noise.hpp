#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "oodeval/rng.hpp"

namespace oodeval {

/// 8-bit RGB image, row-major, 3 channels interleaved.
struct NoiseImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // height * width * 3 bytes

  std::uint8_t at(int y, int x, int c) const {
    return rgb[static_cast<std::size_t>((y * width + x) * 3 + c)];
  }
};

struct NoiseGenConfig {
  std::size_t n_images = 1;
  std::uint64_t seed = 0;
  int target_size = 256;
};

/// Quantized noise field before resampling, plus the generation statistics
/// the statistical checks need.
struct NoiseField {
  int side = 0;
  double sigma = 0.0;
  NoiseImage image;
  std::uint64_t clipped_count = 0;  // draws that fell outside [0, 1]
  double preclip_sum = 0.0;         // sum of draws before clipping
  std::uint64_t value_count = 0;    // side * side * 3
};

/// Per-image contrast scale: z^2 for z drawn standard normal on the sigma
/// stream of image `index`.
double sample_sigma(const CounterRng& rng, std::uint64_t index);

/// Side length for image `index`, uniform over {2..256}.
int sample_side(const CounterRng& rng, std::uint64_t index);

/// Renders the square pre-resize field for image `index`: every value across
/// x, y and the three channels is drawn N(0.5, sigma^2), clipped to [0, 1]
/// and quantized with round-half-up to {0..255}.
NoiseField render_noise_field(const CounterRng& rng, std::uint64_t index,
                              int side, double sigma);

/// Separable Lanczos-3 resampling to target x target, per channel, with
/// kernel-weight normalization and edge clamping. Output values are clipped
/// to [0, 255] and rounded half-up. Same-size calls return the input as-is.
NoiseImage lanczos_resize(const NoiseImage& img, int target);

/// Full per-image pipeline: sample sigma and side, render, resize.
NoiseImage generate_noise_image(const CounterRng& rng, std::uint64_t index,
                                int target_size);

/// Binary PPM (P6) encoding: "P6\n<w> <h>\n255\n" + row-major RGB bytes.
std::vector<std::uint8_t> write_ppm(const NoiseImage& img);

struct NoiseRecord {
  std::uint64_t index;
  double sigma;
  int side;
};

/// Writes noise_<index>.ppm for each image plus a manifest.csv sidecar with
/// one (index, sigma, side) line per image. Returns the records in index
/// order. Image generation may run on several threads.
std::vector<NoiseRecord> generate_noise_dataset(
    const NoiseGenConfig& config, const std::filesystem::path& out_dir,
    unsigned threads = 0);

}  // namespace oodeval
