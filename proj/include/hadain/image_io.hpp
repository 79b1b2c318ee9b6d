#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hadain/image.hpp"

namespace hadain {

enum class ImageFormat { Ppm, Png };

// Picks the format from the file extension (.ppm / .png, case-insensitive).
// Throws UnsupportedFormatError for anything else.
ImageFormat format_from_path(const std::filesystem::path& path);

// 8-bit RGB only. Each byte v becomes v / 255.
Image load_image(const std::filesystem::path& path, ImageFormat format);
Image load_image(const std::filesystem::path& path);

// Quantizes each sample to round-half-up(clamp(s, 0, 1) * 255).
void save_image(const Image& img, const std::filesystem::path& path,
                ImageFormat format);
void save_image(const Image& img, const std::filesystem::path& path);

// In-memory P6 codec; the file functions wrap these for PPM.
Image decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const Image& img);

std::uint8_t quantize_sample(double s) noexcept;

}  // namespace hadain
