#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hadain {

inline constexpr std::size_t kChannels = 3;

// Planar RGB image with double samples, nominally in [0, 1].
// Storage is channel-major: data[(c * height + row) * width + col].
class Image {
 public:
  // Throws ShapeError unless height >= 1 and width >= 1.
  Image(std::size_t height, std::size_t width, double fill = 0.0);
  // Throws ShapeError unless data.size() == 3 * height * width.
  Image(std::size_t height, std::size_t width, std::vector<double> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return kChannels; }
  std::size_t plane_size() const noexcept { return height_ * width_; }

  double& at(std::size_t c, std::size_t row, std::size_t col) noexcept {
    return data_[(c * height_ + row) * width_ + col];
  }
  double at(std::size_t c, std::size_t row, std::size_t col) const noexcept {
    return data_[(c * height_ + row) * width_ + col];
  }

  std::span<double> plane(std::size_t c) noexcept {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> plane(std::size_t c) const noexcept {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> data_;
};

// Axis-aligned pixel rectangle [row, row + height) x [col, col + width).
struct Rect {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect full_rect(const Image& img) {
  return {0, 0, img.height(), img.width()};
}

// Per-channel mean and population standard deviation.
struct ChannelStats {
  std::array<double, kChannels> mu{};
  std::array<double, kChannels> sigma{};
};

// Two-pass statistics over `region`, accumulated row-major. Throws
// BoundsError when the region is empty or leaves the image.
ChannelStats channel_stats(const Image& img, const Rect& region);
ChannelStats channel_stats(const Image& img);

// Copy of the rectangle `region` of `img`.
Image crop(const Image& img, const Rect& region);

// Throws ShapeError with `what` when the two images differ in size.
void require_same_shape(const Image& a, const Image& b, const char* what);

// Clamps every sample to [0, 1].
void clamp_unit(Image& img);

}  // namespace hadain
