#include "doctest.h"

#include "hadain/error.hpp"
#include "hadain/image_io.hpp"
#include "test_util.hpp"

using namespace hadain;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("quantization clamps and rounds half up") {
  CHECK(quantize_sample(1.0) == 255);
  CHECK(quantize_sample(1.7) == 255);
  CHECK(quantize_sample(-0.2) == 0);
  CHECK(quantize_sample(0.5) == 128);  // 127.5 rounds up
  CHECK(quantize_sample(0.0) == 0);
  CHECK(quantize_sample(std::nan("")) == 0);
  for (int v = 0; v < 256; ++v) CHECK(quantize_sample(v / 255.0) == v);
}

TEST_CASE("decode a 1x1 red P6") {
  std::string file = "P6\n1 1\n255\n";
  file += std::string{'\xff', '\x00', '\x00'};
  const Image img = decode_ppm(bytes_of(file));
  CHECK(img.height() == 1);
  CHECK(img.width() == 1);
  CHECK(img.at(0, 0, 0) == 1.0);
  CHECK(img.at(1, 0, 0) == 0.0);
  CHECK(img.at(2, 0, 0) == 0.0);
}

TEST_CASE("decode a 2x2 gray P6 with comments") {
  std::string file = "P6 # magic\n# a comment line\n2 2\n#max\n255\n";
  file += std::string(12, '\x80');
  const Image img = decode_ppm(bytes_of(file));
  for (double v : img.data()) CHECK(v == 128.0 / 255.0);
}

TEST_CASE("encoded P6 is bit exact") {
  Image img(1, 2);
  img.at(0, 0, 0) = 1.0;
  img.at(1, 0, 1) = 0.5;
  img.at(2, 0, 1) = -3.0;
  const auto bytes = encode_ppm(img);
  const std::string expected = std::string("P6\n2 1\n255\n") +
                               std::string{'\xff', '\x00', '\x00', '\x00', '\x80', '\x00'};
  CHECK(bytes == bytes_of(expected));
}

TEST_CASE("PPM errors carry byte offsets") {
  SUBCASE("truncated payload") {
    std::string file = "P6\n2 2\n255\n" + std::string(5, 'a');
    try {
      decode_ppm(bytes_of(file));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == file.size());
      CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
  }
  SUBCASE("bad width token") {
    const std::string file = "P6\nx 2\n255\n";
    try {
      decode_ppm(bytes_of(file));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 3);
    }
  }
  SUBCASE("bad magic") { CHECK_THROWS_AS(decode_ppm(bytes_of("Q6\n")), ParseError); }
  SUBCASE("truncated header") { CHECK_THROWS_AS(decode_ppm(bytes_of("P6\n2 2")), ParseError); }
  SUBCASE("16-bit maxval") {
    CHECK_THROWS_AS(decode_ppm(bytes_of("P6\n1 1\n65535\n\0\0\0\0\0\0")), UnsupportedFormatError);
  }
  SUBCASE("ASCII variant") { CHECK_THROWS_AS(decode_ppm(bytes_of("P3\n1 1\n255\n0 0 0\n")), UnsupportedFormatError); }
}

TEST_CASE("load/save/load is the identity on samples") {
  testing::TempDir dir("io");
  for (auto fmt : {ImageFormat::Ppm, ImageFormat::Png}) {
    const auto path = dir / (fmt == ImageFormat::Ppm ? "a.ppm" : "a.png");
    const auto path2 = dir / (fmt == ImageFormat::Ppm ? "b.ppm" : "b.png");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      save_image(testing::random_image(7 + seed, 5 + 2 * seed, seed, -0.1, 1.1), path);
      const Image once = load_image(path);
      save_image(once, path2);
      const Image twice = load_image(path2);
      CHECK(once == twice);
      CHECK(testing::read_bytes(path) == testing::read_bytes(path2));
    }
  }
}

TEST_CASE("PNG rejects alpha and reports missing files") {
  testing::TempDir dir("png");
  CHECK_THROWS_AS(load_image(dir / "missing.png"), IoError);
  CHECK_THROWS_AS(load_image(dir / "x.bmp"), UnsupportedFormatError);
  // Minimal 1x1 RGBA PNG.
  const unsigned char rgba[] = {
      0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
      0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00,
      0x00, 0x1f, 0x15, 0xc4, 0x89, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78,
      0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xd0, 0x00, 0x00, 0x04, 0x81, 0x01, 0x80, 0x2c, 0x55,
      0xce, 0xb0, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
  testing::write_bytes(dir / "rgba.png", std::string(reinterpret_cast<const char*>(rgba), sizeof rgba));
  CHECK_THROWS_AS(load_image(dir / "rgba.png"), UnsupportedFormatError);

  save_image(Image(3, 3, 0.25), dir / "ok.png");
  auto bytes = testing::read_bytes(dir / "ok.png");
  bytes.resize(bytes.size() / 2);
  testing::write_bytes(dir / "cut.png", std::string(bytes.begin(), bytes.end()));
  CHECK_THROWS_AS(load_image(dir / "cut.png"), ParseError);
  testing::write_bytes(dir / "junk.png", "not a png at all");
  CHECK_THROWS_AS(load_image(dir / "junk.png"), ParseError);
}
