#include "hadain/patch_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hadain/error.hpp"

namespace hadain {

namespace {

// Absorbs representation error in quotients whose exact value is an integer
// (e.g. 1 - 0.7 is not exactly 0.3), so ceil/floor see the intended value.
double snap_to_integer(double q) {
  const double nearest = std::round(q);
  return std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q)) ? nearest : q;
}

void validate(int level, double gamma) {
  if (level < 1) {
    throw ConfigError("level must be >= 1, got " + std::to_string(level));
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ConfigError("overlap ratio must lie in [0, 1), got " + std::to_string(gamma));
  }
}

std::size_t stride_for(std::size_t patch, double gamma) {
  const double s = std::floor(snap_to_integer(static_cast<double>(patch) * (1.0 - gamma)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(s));
}

std::vector<std::size_t> axis_anchors(std::size_t extent, std::size_t patch,
                                      std::size_t stride) {
  std::vector<std::size_t> anchors;
  const std::size_t last = extent - patch;
  for (std::size_t a = 0; a <= last; a += stride) anchors.push_back(a);
  if (anchors.back() != last) anchors.push_back(last);
  return anchors;
}

std::vector<std::size_t> axis_coverage(std::size_t extent, std::size_t patch,
                                       const std::vector<std::size_t>& anchors) {
  std::vector<std::size_t> cov(extent, 0);
  for (auto a : anchors) {
    for (std::size_t i = a; i < a + patch; ++i) ++cov[i];
  }
  return cov;
}

}  // namespace

std::size_t patch_extent(std::size_t extent, int level, double gamma) {
  validate(level, gamma);
  const double denom = 1.0 + static_cast<double>(level - 1) * (1.0 - gamma);
  const double q = snap_to_integer(static_cast<double>(extent) / denom);
  const auto p = static_cast<std::size_t>(std::ceil(q));
  return std::clamp<std::size_t>(p, 1, std::max<std::size_t>(extent, 1));
}

PatchGrid make_grid(std::size_t height, std::size_t width, int level, double gamma) {
  validate(level, gamma);
  if (height == 0 || width == 0) throw ShapeError("grid needs a non-empty image");
  PatchGrid g;
  g.level = level;
  g.image_h = height;
  g.image_w = width;
  g.patch_h = patch_extent(height, level, gamma);
  g.patch_w = patch_extent(width, level, gamma);
  g.stride_h = stride_for(g.patch_h, gamma);
  g.stride_w = stride_for(g.patch_w, gamma);
  g.row_anchors = axis_anchors(height, g.patch_h, g.stride_h);
  g.col_anchors = axis_anchors(width, g.patch_w, g.stride_w);
  return g;
}

std::vector<Rect> PatchGrid::anchors() const {
  std::vector<Rect> out;
  out.reserve(n_patches());
  for (std::size_t i = 0; i < n_patches(); ++i) out.push_back(patch_rect(i));
  return out;
}

std::vector<std::size_t> PatchGrid::row_coverage() const {
  return axis_coverage(image_h, patch_h, row_anchors);
}

std::vector<std::size_t> PatchGrid::col_coverage() const {
  return axis_coverage(image_w, patch_w, col_anchors);
}

std::vector<Image> patchify(const Image& img, const PatchGrid& grid) {
  if (img.height() != grid.image_h || img.width() != grid.image_w) {
    throw ShapeError("patchify: grid built for " + std::to_string(grid.image_h) + "x" +
                     std::to_string(grid.image_w) + ", image is " +
                     std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  std::vector<Image> patches;
  patches.reserve(grid.n_patches());
  for (std::size_t i = 0; i < grid.n_patches(); ++i) {
    patches.push_back(crop(img, grid.patch_rect(i)));
  }
  return patches;
}

Image depatchify(const std::vector<Image>& patches, const PatchGrid& grid,
                 std::size_t height, std::size_t width) {
  if (height != grid.image_h || width != grid.image_w) {
    throw ShapeError("depatchify: grid built for " + std::to_string(grid.image_h) + "x" +
                     std::to_string(grid.image_w) + ", requested " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
  if (patches.size() != grid.n_patches()) {
    throw ShapeError("depatchify: got " + std::to_string(patches.size()) +
                     " patches, grid has " + std::to_string(grid.n_patches()));
  }
  BlendAccumulator acc(height, width);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const Image& p = patches[i];
    if (p.height() != grid.patch_h || p.width() != grid.patch_w) {
      throw ShapeError("depatchify: patch " + std::to_string(i) + " is " +
                       std::to_string(p.height()) + "x" + std::to_string(p.width()) +
                       ", grid expects " + std::to_string(grid.patch_h) + "x" +
                       std::to_string(grid.patch_w));
    }
    const Rect r = grid.patch_rect(i);
    for (std::size_t c = 0; c < kChannels; ++c) {
      for (std::size_t y = 0; y < r.height; ++y) {
        for (std::size_t x = 0; x < r.width; ++x) {
          acc.add(c, r.row + y, r.col + x, p.at(c, y, x));
        }
      }
    }
  }
  return acc.resolve(grid.row_coverage(), grid.col_coverage());
}

BlendAccumulator::BlendAccumulator(std::size_t height, std::size_t width)
    : height_(height),
      width_(width),
      hi_(kChannels * height * width, 0.0),
      lo_(kChannels * height * width, 0.0) {}

Image BlendAccumulator::resolve(const std::vector<std::size_t>& row_coverage,
                                const std::vector<std::size_t>& col_coverage) const {
  if (row_coverage.size() != height_ || col_coverage.size() != width_) {
    throw ShapeError("blend coverage does not match accumulator size");
  }
  Image out(height_, width_);
  for (std::size_t c = 0; c < kChannels; ++c) {
    for (std::size_t r = 0; r < height_; ++r) {
      for (std::size_t col = 0; col < width_; ++col) {
        const std::size_t count = row_coverage[r] * col_coverage[col];
        if (count == 0) throw ShapeError("pixel without contributing patch");
        const std::size_t i = (c * height_ + r) * width_ + col;
        const double k = static_cast<double>(count);
        // (hi + lo) / k with the division remainder folded back in; exact
        // whenever the true mean is representable.
        const double q = hi_[i] / k;
        const double rem = std::fma(-q, k, hi_[i]) + lo_[i];
        out.at(c, r, col) = rem == 0.0 ? q : q + rem / k;
      }
    }
  }
  return out;
}

}  // namespace hadain
