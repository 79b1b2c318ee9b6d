#pragma once

#include <cstddef>
#include <vector>

#include "hadain/adain.hpp"
#include "hadain/image.hpp"
#include "hadain/patch_grid.hpp"

namespace hadain {

struct HAdaInConfig {
  int levels = 30;      // finest hierarchy level L
  double gamma = 0.7;   // overlap ratio in [0, 1)
  double eps = kDefaultEps;
  bool clamp_output = true;

  // Throws ConfigError.
  void validate() const;
};

// Geometry of one level, as reported by hadain_describe.
struct LevelReport {
  int level = 0;
  std::size_t patch_h = 0;
  std::size_t patch_w = 0;
  std::size_t stride_h = 0;
  std::size_t stride_w = 0;
  std::size_t n_patches = 0;
};

// Hierarchical AdaIN. Starting from `generated`, for l = L down to 1 the
// current estimate and the original `reference` are cut into the level-l
// patch grid, each estimate patch is moment-matched to its reference patch,
// and the patches are blended back. The result is clamped to [0, 1] when
// cfg.clamp_output is set.
//
// `threads` only affects speed; the output is bit-identical for any value.
Image hadain_correct(const Image& reference, const Image& generated,
                     const HAdaInConfig& cfg, int threads = 1);

// One level of the above: maps `estimate` onto `reference` patchwise over
// `grid` and returns the blended result, unclamped.
Image hadain_level(const Image& reference, const Image& estimate, const PatchGrid& grid,
                   double eps, int threads = 1);

// Level geometry for l = L down to 1, without touching pixels.
std::vector<LevelReport> hadain_describe(const HAdaInConfig& cfg, std::size_t height,
                                         std::size_t width);

}  // namespace hadain
