#pragma once

#include <cstddef>
#include <vector>

#include "hadain/image.hpp"

namespace hadain {

// Patch layout of one hierarchy level. Patches all have the same size;
// anchors are the Cartesian product of row_anchors and col_anchors, visited
// row-major. The last anchor on each axis is snapped to the image border.
struct PatchGrid {
  int level = 1;
  std::size_t image_h = 0;
  std::size_t image_w = 0;
  std::size_t patch_h = 0;
  std::size_t patch_w = 0;
  std::size_t stride_h = 0;
  std::size_t stride_w = 0;
  std::vector<std::size_t> row_anchors;
  std::vector<std::size_t> col_anchors;

  std::size_t n_patches() const noexcept { return row_anchors.size() * col_anchors.size(); }

  // Rectangle of patch i in row-major anchor order.
  Rect patch_rect(std::size_t i) const noexcept {
    return {row_anchors[i / col_anchors.size()], col_anchors[i % col_anchors.size()],
            patch_h, patch_w};
  }

  std::vector<Rect> anchors() const;

  // Number of patches covering each row (resp. column). The coverage of
  // pixel (r, c) is row_coverage[r] * col_coverage[c].
  std::vector<std::size_t> row_coverage() const;
  std::vector<std::size_t> col_coverage() const;
};

// Patch edge for one axis: ceil(extent / (1 + (level - 1) * (1 - gamma))).
std::size_t patch_extent(std::size_t extent, int level, double gamma);

// Grid for level `level` with overlap ratio `gamma` on an H x W image.
// Throws ConfigError unless level >= 1 and 0 <= gamma < 1, ShapeError for an
// empty image.
PatchGrid make_grid(std::size_t height, std::size_t width, int level, double gamma);

std::vector<Image> patchify(const Image& img, const PatchGrid& grid);

// Uniform average of all patches covering each pixel, summed in anchor order.
Image depatchify(const std::vector<Image>& patches, const PatchGrid& grid,
                 std::size_t height, std::size_t width);

// Per-sample running sums kept as an unevaluated double-double pair, so a
// pixel whose contributors all carry the same value v resolves to exactly v.
class BlendAccumulator {
 public:
  BlendAccumulator(std::size_t height, std::size_t width);

  void add(std::size_t c, std::size_t row, std::size_t col, double v) noexcept {
    const std::size_t i = (c * height_ + row) * width_ + col;
    // TwoSum of hi + v, then fold in the running low part.
    const double s = hi_[i] + v;
    const double bv = s - hi_[i];
    const double err = (hi_[i] - (s - bv)) + (v - bv);
    const double lo = lo_[i] + err;
    const double t = s + lo;
    lo_[i] = lo - (t - s);
    hi_[i] = t;
  }

  // Mean per pixel given its contributor count.
  Image resolve(const std::vector<std::size_t>& row_coverage,
                const std::vector<std::size_t>& col_coverage) const;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> hi_;
  std::vector<double> lo_;
};

}  // namespace hadain
