#include "oodeval/noise.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>

#include "oodeval/errors.hpp"
#include "oodeval/parallel.hpp"

namespace oodeval {

namespace {

constexpr std::uint64_t kSigmaStream = 10;
constexpr std::uint64_t kSideStream = 11;
constexpr std::uint64_t kPixelStream = 12;

constexpr double kPi = 3.14159265358979323846;
constexpr double kLanczosA = 3.0;

double lanczos_kernel(double x) {
  x = std::abs(x);
  if (x >= kLanczosA) return 0.0;
  if (x < 1e-12) return 1.0;
  const double px = kPi * x;
  return kLanczosA * std::sin(px) * std::sin(px / kLanczosA) / (px * px);
}

int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

std::uint8_t quantize_byte(double v) {
  // v already clipped to [0, 255]; round half up.
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

struct Tap {
  int lo;
  std::vector<double> weights;  // normalized
};

// Contribution taps for one output coordinate along an axis of length
// src_n resampled to dst_n.
Tap make_taps(int x, int src_n, int dst_n) {
  const double scale = static_cast<double>(src_n) / static_cast<double>(dst_n);
  const double filter_scale = scale > 1.0 ? scale : 1.0;  // widen for downscale
  const double center = (x + 0.5) * scale - 0.5;
  const double reach = kLanczosA * filter_scale;
  const int lo = static_cast<int>(std::ceil(center - reach));
  const int hi = static_cast<int>(std::floor(center + reach));
  Tap tap{lo, {}};
  tap.weights.reserve(static_cast<std::size_t>(hi - lo + 1));
  double sum = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double w =
        lanczos_kernel((static_cast<double>(i) - center) / filter_scale);
    tap.weights.push_back(w);
    sum += w;
  }
  for (double& w : tap.weights) w /= sum;
  return tap;
}

}  // namespace

double sample_sigma(const CounterRng& rng, std::uint64_t index) {
  const double z = rng.normal(kSigmaStream, index, 0, 0);
  return z * z;
}

int sample_side(const CounterRng& rng, std::uint64_t index) {
  return 2 + static_cast<int>(rng.uniform_below(255, kSideStream, index, 0, 0));
}

NoiseField render_noise_field(const CounterRng& rng, std::uint64_t index,
                              int side, double sigma) {
  if (side < 1) throw invalid_input_error("render_noise_field: side < 1");
  if (!(sigma >= 0.0)) throw invalid_input_error("render_noise_field: sigma < 0");
  NoiseField field;
  field.side = side;
  field.sigma = sigma;
  field.value_count = static_cast<std::uint64_t>(side) * side * 3;
  field.image.width = side;
  field.image.height = side;
  field.image.rgb.resize(field.value_count);
  for (std::uint64_t j = 0; j < field.value_count; ++j) {
    const double x = 0.5 + sigma * rng.normal(kPixelStream, index, j, 0);
    field.preclip_sum += x;
    double clipped = x;
    if (x < 0.0) {
      clipped = 0.0;
      ++field.clipped_count;
    } else if (x > 1.0) {
      clipped = 1.0;
      ++field.clipped_count;
    }
    field.image.rgb[j] =
        static_cast<std::uint8_t>(std::floor(255.0 * clipped + 0.5));
  }
  return field;
}

NoiseImage lanczos_resize(const NoiseImage& img, int target) {
  if (target < 1) throw invalid_input_error("lanczos_resize: target < 1");
  if (img.width < 1 || img.height < 1 ||
      img.rgb.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
    throw invalid_input_error("lanczos_resize: malformed image");
  }
  if (img.width == target && img.height == target) return img;

  // Horizontal pass into doubles; quantization happens only once at the end.
  std::vector<double> mid(static_cast<std::size_t>(img.height) * target * 3);
  for (int x = 0; x < target; ++x) {
    const Tap tap = make_taps(x, img.width, target);
    for (int y = 0; y < img.height; ++y) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t t = 0; t < tap.weights.size(); ++t) {
          const int sx = clamp_index(tap.lo + static_cast<int>(t), img.width);
          acc += tap.weights[t] * img.at(y, sx, c);
        }
        mid[(static_cast<std::size_t>(y) * target + x) * 3 + c] = acc;
      }
    }
  }

  NoiseImage out;
  out.width = target;
  out.height = target;
  out.rgb.resize(static_cast<std::size_t>(target) * target * 3);
  for (int y = 0; y < target; ++y) {
    const Tap tap = make_taps(y, img.height, target);
    for (int x = 0; x < target; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t t = 0; t < tap.weights.size(); ++t) {
          const int sy = clamp_index(tap.lo + static_cast<int>(t), img.height);
          acc += tap.weights[t] *
                 mid[(static_cast<std::size_t>(sy) * target + x) * 3 + c];
        }
        if (acc < 0.0) acc = 0.0;
        if (acc > 255.0) acc = 255.0;
        out.rgb[(static_cast<std::size_t>(y) * target + x) * 3 + c] =
            quantize_byte(acc);
      }
    }
  }
  return out;
}

NoiseImage generate_noise_image(const CounterRng& rng, std::uint64_t index,
                                int target_size) {
  const double sigma = sample_sigma(rng, index);
  const int side = sample_side(rng, index);
  NoiseField field = render_noise_field(rng, index, side, sigma);
  if (side == target_size) return std::move(field.image);
  return lanczos_resize(field.image, target_size);
}

std::vector<std::uint8_t> write_ppm(const NoiseImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> bytes;
  bytes.reserve(header.size() + img.rgb.size());
  bytes.insert(bytes.end(), header.begin(), header.end());
  bytes.insert(bytes.end(), img.rgb.begin(), img.rgb.end());
  return bytes;
}

std::vector<NoiseRecord> generate_noise_dataset(
    const NoiseGenConfig& config, const std::filesystem::path& out_dir,
    unsigned threads) {
  if (config.n_images < 1) {
    throw invalid_input_error("generate_noise_dataset: n_images < 1");
  }
  if (config.target_size < 1) {
    throw invalid_input_error("generate_noise_dataset: target_size < 1");
  }
  std::filesystem::create_directories(out_dir);

  const CounterRng rng(config.seed);
  std::vector<NoiseImage> images(config.n_images);
  std::vector<NoiseRecord> records(config.n_images);
  parallel_for(config.n_images, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      records[i] = NoiseRecord{i, sample_sigma(rng, i), sample_side(rng, i)};
      images[i] = generate_noise_image(rng, i, config.target_size);
    }
  });

  for (std::size_t i = 0; i < config.n_images; ++i) {
    const auto bytes = write_ppm(images[i]);
    const auto path = out_dir / ("noise_" + std::to_string(i) + ".ppm");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }

  std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
  if (!manifest) {
    throw parse_error("cannot open " + (out_dir / "manifest.csv").string() +
                      " for writing");
  }
  manifest << "index,sigma,side\n";
  char buf[64];
  for (const auto& rec : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", rec.sigma);
    manifest << rec.index << ',' << buf << ',' << rec.side << '\n';
  }
  return records;
}

}  // namespace oodeval
