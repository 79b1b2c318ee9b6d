#include "hadain/shift_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hadain/error.hpp"

namespace hadain {

std::string_view to_string(ShiftKind kind) noexcept {
  switch (kind) {
    case ShiftKind::GlobalAffine:
      return "global_affine";
    case ShiftKind::BlockAffine:
      return "block_affine";
    case ShiftKind::SmoothField:
      return "smooth_field";
  }
  return "global_affine";
}

ShiftKind parse_shift_kind(std::string_view name) {
  if (name == "global_affine" || name == "global") return ShiftKind::GlobalAffine;
  if (name == "block_affine" || name == "block") return ShiftKind::BlockAffine;
  if (name == "smooth_field" || name == "smooth") return ShiftKind::SmoothField;
  throw ConfigError("unknown shift kind '" + std::string(name) +
                    "' (expected global, block or smooth)");
}

RetouchLabel RetouchLabel::from_values(const std::vector<int>& values) {
  if (values.size() != 3) {
    throw ConfigError("retouch label needs exactly 3 degrees, got " +
                      std::to_string(values.size()));
  }
  RetouchLabel label;
  for (std::size_t i = 0; i < 3; ++i) {
    if (values[i] < 0 || values[i] > 3) {
      throw ConfigError("retouch degree " + std::to_string(values[i]) +
                        " outside 0..3");
    }
    label.degrees[i] = values[i];
  }
  return label;
}

void ShiftSpec::validate() const {
  if (rows == 0 || cols == 0) throw ConfigError("shift table dims must be >= 1");
  if (kind == ShiftKind::GlobalAffine && (rows != 1 || cols != 1)) {
    throw ConfigError("global_affine shift must have a 1x1 table");
  }
  if (kind == ShiftKind::SmoothField && (rows < 2 || cols < 2)) {
    throw ConfigError("smooth_field lattice must be at least 2x2");
  }
  if (gains.size() != rows * cols || biases.size() != rows * cols) {
    throw ConfigError("shift table holds " + std::to_string(gains.size()) + " gains and " +
                      std::to_string(biases.size()) + " biases, expected " +
                      std::to_string(rows * cols));
  }
  for (const auto& g : gains) {
    for (double v : g) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("shift gains must be positive and finite, got " +
                          std::to_string(v));
      }
    }
  }
  for (const auto& b : biases) {
    for (double v : b) {
      if (!std::isfinite(v)) throw ConfigError("shift biases must be finite");
    }
  }
}

ShiftSpec identity_spec(ShiftKind kind, std::size_t rows, std::size_t cols) {
  ShiftSpec s;
  s.kind = kind;
  s.rows = rows;
  s.cols = cols;
  s.gains.assign(rows * cols, Rgb{1.0, 1.0, 1.0});
  s.biases.assign(rows * cols, Rgb{0.0, 0.0, 0.0});
  s.validate();
  return s;
}

std::size_t default_rows(ShiftKind kind) noexcept {
  switch (kind) {
    case ShiftKind::GlobalAffine:
      return 1;
    case ShiftKind::BlockAffine:
      return 3;
    case ShiftKind::SmoothField:
      return 4;
  }
  return 1;
}

std::size_t default_cols(ShiftKind kind) noexcept { return default_rows(kind); }

ShiftSpec random_spec(ShiftKind kind, std::size_t height, std::size_t width,
                      std::uint64_t seed, double magnitude, std::size_t rows,
                      std::size_t cols) {
  if (!(magnitude > 0.0 && magnitude <= 1.0)) {
    throw ConfigError("magnitude must lie in (0, 1], got " + std::to_string(magnitude));
  }
  if (height == 0 || width == 0) throw ShapeError("shift target must be non-empty");
  ShiftSpec s;
  s.kind = kind;
  s.rows = rows == 0 ? default_rows(kind) : rows;
  s.cols = cols == 0 ? default_cols(kind) : cols;
  if (kind == ShiftKind::BlockAffine && (s.rows > height || s.cols > width)) {
    throw ConfigError("block grid larger than the image");
  }
  s.seed = seed;
  s.magnitude = magnitude;
  s.gains.resize(s.rows * s.cols);
  s.biases.resize(s.rows * s.cols);
  SplitMix64 rng(seed);
  for (std::size_t cell = 0; cell < s.rows * s.cols; ++cell) {
    for (auto& g : s.gains[cell]) g = rng.uniform(1.0 - 0.5 * magnitude, 1.0 + 0.5 * magnitude);
    for (auto& b : s.biases[cell]) b = rng.uniform(-0.2 * magnitude, 0.2 * magnitude);
  }
  s.validate();
  return s;
}

namespace {

// Fractional lattice coordinate of pixel index i on an axis of n pixels.
double lattice_coord(std::size_t i, std::size_t n, std::size_t nodes) {
  if (n <= 1) return 0.0;
  return static_cast<double>(i) * static_cast<double>(nodes - 1) / static_cast<double>(n - 1);
}

}  // namespace

std::pair<double, double> shift_at(const ShiftSpec& spec, std::size_t c, std::size_t row,
                                   std::size_t col, std::size_t height, std::size_t width) {
  switch (spec.kind) {
    case ShiftKind::GlobalAffine:
      return {spec.gains[0][c], spec.biases[0][c]};
    case ShiftKind::BlockAffine: {
      const std::size_t br = row * spec.rows / height;
      const std::size_t bc = col * spec.cols / width;
      const std::size_t cell = br * spec.cols + bc;
      return {spec.gains[cell][c], spec.biases[cell][c]};
    }
    case ShiftKind::SmoothField: {
      const double u = lattice_coord(row, height, spec.rows);
      const double v = lattice_coord(col, width, spec.cols);
      const std::size_t r0 = std::min(static_cast<std::size_t>(u), spec.rows - 2);
      const std::size_t c0 = std::min(static_cast<std::size_t>(v), spec.cols - 2);
      const double ty = u - static_cast<double>(r0);
      const double tx = v - static_cast<double>(c0);
      // a + t * (b - a) keeps equal corners exact, so an identity lattice
      // leaves every sample untouched.
      auto lerp = [](double a, double b, double t) { return a + t * (b - a); };
      auto bilerp = [&](const std::vector<Rgb>& t) {
        const std::size_t i = r0 * spec.cols + c0;
        const double top = lerp(t[i][c], t[i + 1][c], tx);
        const double bot = lerp(t[i + spec.cols][c], t[i + spec.cols + 1][c], tx);
        return lerp(top, bot, ty);
      };
      return {bilerp(spec.gains), bilerp(spec.biases)};
    }
  }
  return {1.0, 0.0};
}

Image apply_shift(const Image& img, const ShiftSpec& spec) {
  spec.validate();
  Image out(img.height(), img.width());
  for (std::size_t c = 0; c < kChannels; ++c) {
    for (std::size_t r = 0; r < img.height(); ++r) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        const auto [a, b] = shift_at(spec, c, r, x, img.height(), img.width());
        out.at(c, r, x) = a * img.at(c, r, x) + b;
      }
    }
  }
  return out;
}

Image invert_shift(const Image& shifted, const ShiftSpec& spec) {
  spec.validate();
  Image out(shifted.height(), shifted.width());
  for (std::size_t c = 0; c < kChannels; ++c) {
    for (std::size_t r = 0; r < shifted.height(); ++r) {
      for (std::size_t x = 0; x < shifted.width(); ++x) {
        const auto [a, b] = shift_at(spec, c, r, x, shifted.height(), shifted.width());
        out.at(c, r, x) = (shifted.at(c, r, x) - b) / a;
      }
    }
  }
  return out;
}

nlohmann::json to_json(const ShiftSpec& spec) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["grid"] = {{"rows", spec.rows}, {"cols", spec.cols}};
  j["gains"] = spec.gains;
  j["biases"] = spec.biases;
  j["seed"] = spec.seed;
  j["magnitude"] = spec.magnitude;
  if (spec.label) j["label"] = spec.label->degrees;
  return j;
}

ShiftSpec shift_spec_from_json(const nlohmann::json& j) {
  try {
    ShiftSpec s;
    s.kind = parse_shift_kind(j.at("kind").get<std::string>());
    s.rows = j.at("grid").at("rows").get<std::size_t>();
    s.cols = j.at("grid").at("cols").get<std::size_t>();
    s.gains = j.at("gains").get<std::vector<Rgb>>();
    s.biases = j.at("biases").get<std::vector<Rgb>>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.magnitude = j.value("magnitude", 0.0);
    if (j.contains("label")) {
      s.label = RetouchLabel::from_values(j.at("label").get<std::vector<int>>());
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid shift spec JSON: ") + e.what());
  }
}

Image synthetic_image(std::size_t height, std::size_t width, std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5eed5eed5eed5eedULL);
  Image img(height, width);
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  const double span = std::max(h, w);
  for (std::size_t c = 0; c < kChannels; ++c) {
    const double base = rng.uniform(0.3, 0.7);
    const double gy = rng.uniform(-0.5, 0.5);
    const double gx = rng.uniform(-0.5, 0.5);
    struct Wave { double fy, fx, phase, amp; };
    struct Blob { double cy, cx, radius, amp; };
    std::array<Wave, 3> waves{};
    for (auto& wv : waves) {
      const double period = rng.uniform(8.0, 64.0);
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      wv = {std::sin(angle) / period, std::cos(angle) / period,
            rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.05, 0.2)};
    }
    std::array<Blob, 4> blobs{};
    for (auto& b : blobs) {
      b = {rng.uniform(0.0, h), rng.uniform(0.0, w), rng.uniform(0.05, 0.2) * span,
           rng.uniform(-0.4, 0.4)};
    }
    auto plane = img.plane(c);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t x = 0; x < width; ++x) {
        const double y = static_cast<double>(r);
        const double xx = static_cast<double>(x);
        double v = base + gy * y / h + gx * xx / w;
        for (const auto& wv : waves) {
          v += wv.amp * std::sin(2.0 * std::numbers::pi * (wv.fy * y + wv.fx * xx) + wv.phase);
        }
        for (const auto& b : blobs) {
          const double d2 = (y - b.cy) * (y - b.cy) + (xx - b.cx) * (xx - b.cx);
          v += b.amp * std::exp(-d2 / (2.0 * b.radius * b.radius));
        }
        v += rng.uniform(-0.02, 0.02);
        plane[r * width + x] = v;
      }
    }
    const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
    const double mn = *lo;
    const double range = std::max(*hi - mn, 1e-12);
    for (double& v : plane) v = 0.05 + 0.9 * (v - mn) / range;
  }
  return img;
}

}  // namespace hadain
