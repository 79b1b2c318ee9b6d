#include "hadain/hadain.hpp"

#include <algorithm>
#include <string>

#include "hadain/error.hpp"
#include "hadain/parallel.hpp"

namespace hadain {

void HAdaInConfig::validate() const {
  if (levels < 1) throw ConfigError("levels must be >= 1, got " + std::to_string(levels));
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ConfigError("overlap must lie in [0, 1), got " + std::to_string(gamma));
  }
  require_valid_eps(eps);
}

Image hadain_level(const Image& reference, const Image& estimate, const PatchGrid& grid,
                   double eps, int threads) {
  require_same_shape(reference, estimate, "hadain");
  if (estimate.height() != grid.image_h || estimate.width() != grid.image_w) {
    throw ShapeError("hadain: grid does not match image size");
  }
  const std::size_t n = grid.n_patches();
  std::vector<AdainMap> maps(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Rect r = grid.patch_rect(i);
      maps[i] = AdainMap{channel_stats(estimate, r), channel_stats(reference, r), eps};
    }
  });

  // Each worker owns a band of output rows and visits patches in anchor
  // order, so every pixel sums its contributors in the same order as
  // depatchify regardless of the thread count.
  BlendAccumulator acc(grid.image_h, grid.image_w);
  const std::size_t cols = grid.col_anchors.size();
  parallel_for(grid.image_h, threads, [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t ri = 0; ri < grid.row_anchors.size(); ++ri) {
      const std::size_t top = grid.row_anchors[ri];
      const std::size_t lo = std::max(top, row_begin);
      const std::size_t hi = std::min(top + grid.patch_h, row_end);
      if (lo >= hi) continue;
      for (std::size_t ci = 0; ci < cols; ++ci) {
        const AdainMap& m = maps[ri * cols + ci];
        const std::size_t left = grid.col_anchors[ci];
        for (std::size_t c = 0; c < kChannels; ++c) {
          for (std::size_t r = lo; r < hi; ++r) {
            for (std::size_t x = left; x < left + grid.patch_w; ++x) {
              acc.add(c, r, x, adain_sample(m, c, estimate.at(c, r, x)));
            }
          }
        }
      }
    }
  });
  return acc.resolve(grid.row_coverage(), grid.col_coverage());
}

Image hadain_correct(const Image& reference, const Image& generated,
                     const HAdaInConfig& cfg, int threads) {
  require_same_shape(reference, generated, "hadain");
  cfg.validate();
  Image estimate = generated;
  for (int level = cfg.levels; level >= 1; --level) {
    const PatchGrid grid =
        make_grid(reference.height(), reference.width(), level, cfg.gamma);
    estimate = hadain_level(reference, estimate, grid, cfg.eps, threads);
  }
  if (cfg.clamp_output) clamp_unit(estimate);
  return estimate;
}

std::vector<LevelReport> hadain_describe(const HAdaInConfig& cfg, std::size_t height,
                                         std::size_t width) {
  cfg.validate();
  std::vector<LevelReport> out;
  out.reserve(static_cast<std::size_t>(cfg.levels));
  for (int level = cfg.levels; level >= 1; --level) {
    const PatchGrid g = make_grid(height, width, level, cfg.gamma);
    out.push_back({level, g.patch_h, g.patch_w, g.stride_h, g.stride_w, g.n_patches()});
  }
  return out;
}

}  // namespace hadain
