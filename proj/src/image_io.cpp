#include "hadain/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <fstream>
#include <iterator>
#include <string>

#include "hadain/error.hpp"

namespace hadain {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Image from_interleaved(std::size_t height, std::size_t width,
                       std::span<const std::uint8_t> rgb) {
  Image img(height, width);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t col = 0; col < width; ++col) {
      const std::size_t i = (r * width + col) * kChannels;
      for (std::size_t c = 0; c < kChannels; ++c) {
        img.at(c, r, col) = rgb[i + c] / 255.0;
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> to_interleaved(const Image& img) {
  std::vector<std::uint8_t> rgb(kChannels * img.plane_size());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t col = 0; col < img.width(); ++col) {
      const std::size_t i = (r * img.width() + col) * kChannels;
      for (std::size_t c = 0; c < kChannels; ++c) {
        rgb[i + c] = quantize_sample(img.at(c, r, col));
      }
    }
  }
  return rgb;
}

// Cursor over a P6 header: whitespace and '#' comments between tokens.
class PpmHeaderReader {
 public:
  PpmHeaderReader(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t pos() const noexcept { return pos_; }

  void skip_separators() {
    bool any = false;
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
        any = true;
      } else if (std::isspace(ch)) {
        ++pos_;
        any = true;
      } else {
        break;
      }
    }
    if (!any) {
      if (pos_ >= bytes_.size()) throw ParseError("truncated PPM header", pos_);
      throw ParseError("expected whitespace in PPM header", pos_);
    }
  }

  std::size_t read_uint(const char* field) {
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1u << 24) {
        throw ParseError(std::string("PPM ") + field + " too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) {
        throw ParseError(std::string("truncated PPM header before ") + field, pos_);
      }
      throw ParseError(std::string("expected decimal ") + field + " in PPM header", pos_);
    }
    return value;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size()) throw ParseError("truncated PPM header", pos_);
    if (!std::isspace(bytes_[pos_])) {
      throw ParseError("expected single whitespace byte after maxval", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

struct PngReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
  std::string message;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (len > st->bytes.size() - st->pos) {
    st->message = "truncated PNG data";
    png_longjmp(png, 1);
  }
  std::copy_n(st->bytes.data() + st->pos, len, out);
  st->pos += len;
}

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
  if (st->message.empty()) st->message = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw ParseError("missing PNG signature", 0);
  }
  PngReadState st{bytes, 0, {}};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st,
                                           png_error_handler, png_warning_handler);
  if (!png) throw Error("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng initialisation failed");
  }

  // Only POD state may be touched between setjmp and a longjmp back here.
  std::vector<std::uint8_t> rgb;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  volatile int unsupported = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("malformed PNG: " + st.message, st.pos);
  }
  png_set_read_fn(png, &st, png_read_from_span);
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (depth != 8) {
    unsupported = 1;
  } else if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    unsupported = 2;
  } else if (color != PNG_COLOR_TYPE_RGB && color != PNG_COLOR_TYPE_PALETTE) {
    unsupported = 3;
  }
  if (unsupported == 0) {
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    rgb.resize(static_cast<std::size_t>(width) * height * kChannels);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 r = 0; r < height; ++r) {
      rows[r] = rgb.data() + static_cast<std::size_t>(r) * width * kChannels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  switch (unsupported) {
    case 1:
      throw UnsupportedFormatError("PNG bit depth " + std::to_string(depth) +
                                   " is not supported (8-bit only)");
    case 2:
      throw UnsupportedFormatError("PNG with alpha channel is not supported");
    case 3:
      throw UnsupportedFormatError("PNG color type " + std::to_string(color) +
                                   " is not supported (RGB only)");
    default:
      break;
  }
  return from_interleaved(height, width, rgb);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  const auto rgb = to_interleaved(img);
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG encoding failed: " + msg);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG encoding failed: " + msg);
  }
  out.resize(size);
  return out;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

}  // namespace

std::uint8_t quantize_sample(double s) noexcept {
  if (!(s > 0.0)) return 0;  // also maps NaN to 0
  if (s >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(s * 255.0 + 0.5));
}

ImageFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".ppm") return ImageFormat::Ppm;
  if (ext == ".png") return ImageFormat::Png;
  throw UnsupportedFormatError("cannot infer image format from '" +
                               path.string() + "' (expected .ppm or .png)");
}

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw ParseError("truncated PPM magic", bytes.size());
  if (bytes[0] != 'P') throw ParseError("bad PPM magic", 0);
  if (bytes[1] != '6') {
    if (bytes[1] >= '1' && bytes[1] <= '7') {
      throw UnsupportedFormatError(std::string("PNM variant P") +
                                   static_cast<char>(bytes[1]) +
                                   " is not supported (P6 only)");
    }
    throw ParseError("bad PPM magic", 1);
  }
  // Header tokens start right after "P6".
  PpmHeaderReader header(bytes, 2);
  header.skip_separators();
  const std::size_t width = header.read_uint("width");
  header.skip_separators();
  const std::size_t height = header.read_uint("height");
  header.skip_separators();
  const std::size_t maxval_at = header.pos();
  const std::size_t maxval = header.read_uint("maxval");
  if (width == 0 || height == 0) {
    throw ParseError("PPM dimensions must be positive", maxval_at);
  }
  if (maxval != 255) {
    if (maxval == 0 || maxval > 65535) {
      throw ParseError("invalid PPM maxval " + std::to_string(maxval), maxval_at);
    }
    throw UnsupportedFormatError("PPM maxval " + std::to_string(maxval) +
                                 " is not supported (8-bit, maxval 255 only)");
  }
  header.single_whitespace();
  const std::size_t payload_at = header.pos();
  const std::size_t need = width * height * kChannels;
  if (bytes.size() - payload_at < need) {
    throw ParseError("truncated PPM payload: expected " + std::to_string(need) +
                         " bytes, found " + std::to_string(bytes.size() - payload_at),
                     bytes.size());
  }
  return from_interleaved(height, width, bytes.subspan(payload_at, need));
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto rgb = to_interleaved(img);
  out.insert(out.end(), rgb.begin(), rgb.end());
  return out;
}

Image load_image(const std::filesystem::path& path, ImageFormat format) {
  const auto bytes = read_file(path);
  try {
    return format == ImageFormat::Ppm ? decode_ppm(bytes) : decode_png(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.offset());
  } catch (const UnsupportedFormatError& e) {
    throw UnsupportedFormatError(path.string() + ": " + e.what());
  }
}

Image load_image(const std::filesystem::path& path) {
  return load_image(path, format_from_path(path));
}

void save_image(const Image& img, const std::filesystem::path& path,
                ImageFormat format) {
  const auto bytes = format == ImageFormat::Ppm ? encode_ppm(img) : encode_png(img);
  write_file(path, bytes);
}

void save_image(const Image& img, const std::filesystem::path& path) {
  save_image(img, path, format_from_path(path));
}

}  // namespace hadain
