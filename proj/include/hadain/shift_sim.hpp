#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hadain/image.hpp"

namespace hadain {

// SplitMix64 (Steele, Lea & Flood 2014). Pinned so fixtures regenerate
// bit-identically in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Top 53 bits scaled to [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

enum class ShiftKind { GlobalAffine, BlockAffine, SmoothField };

std::string_view to_string(ShiftKind kind) noexcept;
// Accepts the canonical names (global_affine, ...) and the CLI short forms
// (global, block, smooth). Throws ConfigError otherwise.
ShiftKind parse_shift_kind(std::string_view name);

// Retouching degrees (eye enlarging, face lifting, smoothing), each 0..3.
// Carried through manifests untouched; nothing here interprets it.
struct RetouchLabel {
  std::array<int, 3> degrees{};

  // Throws ConfigError unless every degree is in 0..3.
  static RetouchLabel from_values(const std::vector<int>& values);

  friend bool operator==(const RetouchLabel&, const RetouchLabel&) = default;
};

using Rgb = std::array<double, kChannels>;

// Per-pixel affine colour shift out = gain * in + bias. The (rows x cols)
// table of gains/biases is read as one global cell, piecewise-constant
// blocks, or a bilinearly interpolated lattice depending on `kind`.
struct ShiftSpec {
  ShiftKind kind = ShiftKind::GlobalAffine;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<Rgb> gains{Rgb{1.0, 1.0, 1.0}};  // row-major cells
  std::vector<Rgb> biases{Rgb{0.0, 0.0, 0.0}};
  std::uint64_t seed = 0;
  double magnitude = 0.0;
  std::optional<RetouchLabel> label;

  // Throws ConfigError on non-positive gains, bad dims or table sizes.
  void validate() const;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

// Spec whose every cell is gain 1, bias 0.
ShiftSpec identity_spec(ShiftKind kind, std::size_t rows = 1, std::size_t cols = 1);

// Default table sizes: 1x1 global, 3x3 blocks, 4x4 lattice.
std::size_t default_rows(ShiftKind kind) noexcept;
std::size_t default_cols(ShiftKind kind) noexcept;

// Draws a spec from SplitMix64(seed): for each cell in row-major order,
// three gains in [1 - m/2, 1 + m/2] (R, G, B), then three biases in
// [-m/5, m/5]. Throws ConfigError unless magnitude lies in (0, 1].
ShiftSpec random_spec(ShiftKind kind, std::size_t height, std::size_t width,
                      std::uint64_t seed, double magnitude, std::size_t rows = 0,
                      std::size_t cols = 0);

// Unclamped. Throws ConfigError for an invalid spec.
Image apply_shift(const Image& img, const ShiftSpec& spec);
// Analytic inverse: (out - bias) / gain.
Image invert_shift(const Image& shifted, const ShiftSpec& spec);

// Per-pixel (gain, bias) for channel c at (row, col) of an H x W image.
std::pair<double, double> shift_at(const ShiftSpec& spec, std::size_t c, std::size_t row,
                                   std::size_t col, std::size_t height, std::size_t width);

nlohmann::json to_json(const ShiftSpec& spec);
ShiftSpec shift_spec_from_json(const nlohmann::json& j);

// Deterministic textured fixture in [0.05, 0.95]: per-channel gradients,
// sinusoids and Gaussian blobs drawn from SplitMix64(seed).
Image synthetic_image(std::size_t height, std::size_t width, std::uint64_t seed);

}  // namespace hadain
