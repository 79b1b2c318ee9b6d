#include "hadain/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hadain/error.hpp"

namespace hadain {

namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw ShapeError("image dimensions must be at least 1x1, got " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
}

void check_region(const Image& img, const Rect& r) {
  if (r.height == 0 || r.width == 0) {
    throw BoundsError("empty region");
  }
  if (r.row > img.height() || r.height > img.height() - r.row ||
      r.col > img.width() || r.width > img.width() - r.col) {
    throw BoundsError("region [" + std::to_string(r.row) + "+" +
                      std::to_string(r.height) + ", " + std::to_string(r.col) +
                      "+" + std::to_string(r.width) + "] outside " +
                      std::to_string(img.height()) + "x" +
                      std::to_string(img.width()) + " image");
  }
}

}  // namespace

Image::Image(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  data_.assign(kChannels * height * width, fill);
}

Image::Image(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != kChannels * height * width) {
    throw ShapeError("image buffer holds " + std::to_string(data_.size()) +
                     " samples, expected " +
                     std::to_string(kChannels * height * width));
  }
}

ChannelStats channel_stats(const Image& img, const Rect& region) {
  check_region(img, region);
  const double n = static_cast<double>(region.height * region.width);
  ChannelStats s;
  for (std::size_t c = 0; c < kChannels; ++c) {
    double sum = 0.0;
    for (std::size_t r = region.row; r < region.row + region.height; ++r) {
      for (std::size_t col = region.col; col < region.col + region.width; ++col) {
        sum += img.at(c, r, col);
      }
    }
    const double mu = sum / n;
    double sq = 0.0;
    for (std::size_t r = region.row; r < region.row + region.height; ++r) {
      for (std::size_t col = region.col; col < region.col + region.width; ++col) {
        const double d = img.at(c, r, col) - mu;
        sq += d * d;
      }
    }
    s.mu[c] = mu;
    s.sigma[c] = std::sqrt(sq / n);
  }
  return s;
}

ChannelStats channel_stats(const Image& img) {
  return channel_stats(img, full_rect(img));
}

Image crop(const Image& img, const Rect& region) {
  check_region(img, region);
  Image out(region.height, region.width);
  for (std::size_t c = 0; c < kChannels; ++c) {
    for (std::size_t r = 0; r < region.height; ++r) {
      for (std::size_t col = 0; col < region.width; ++col) {
        out.at(c, r, col) = img.at(c, region.row + r, region.col + col);
      }
    }
  }
  return out;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": dimension mismatch " +
                     std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " +
                     std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
}

void clamp_unit(Image& img) {
  for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace hadain
