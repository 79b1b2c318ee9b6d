#include "doctest.h"

#include "hadain/adain.hpp"
#include "hadain/error.hpp"
#include "hadain/shift_sim.hpp"
#include "test_util.hpp"

using namespace hadain;
using testing::max_abs_diff;
using testing::random_image;

TEST_CASE("SplitMix64 matches the reference implementation stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("identity specs leave the image untouched") {
  const Image img = random_image(13, 17, 1);
  CHECK(testing::bit_identical(apply_shift(img, identity_spec(ShiftKind::GlobalAffine)), img));
  CHECK(testing::bit_identical(apply_shift(img, identity_spec(ShiftKind::BlockAffine, 3, 2)), img));
  CHECK(testing::bit_identical(apply_shift(img, identity_spec(ShiftKind::SmoothField, 4, 5)), img));
}

TEST_CASE("global affine maps s to a*s + b") {
  const Image img = random_image(4, 5, 2);
  ShiftSpec spec = identity_spec(ShiftKind::GlobalAffine);
  spec.gains[0] = {2.0, 2.0, 2.0};
  spec.biases[0] = {0.1, 0.1, 0.1};
  const Image out = apply_shift(img, spec);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    CHECK(out.data()[i] == 2.0 * img.data()[i] + 0.1);
  }
}

TEST_CASE("block affine assigns pixels to their block") {
  ShiftSpec spec = identity_spec(ShiftKind::BlockAffine, 2, 2);
  for (std::size_t cell = 0; cell < 4; ++cell) spec.biases[cell] = {double(cell), 0.0, 0.0};
  const Image out = apply_shift(Image(4, 4, 0.0), spec);
  CHECK(out.at(0, 0, 0) == 0.0);
  CHECK(out.at(0, 0, 3) == 1.0);
  CHECK(out.at(0, 3, 0) == 2.0);
  CHECK(out.at(0, 3, 3) == 3.0);
  CHECK(out.at(0, 1, 1) == 0.0);
  CHECK(out.at(0, 2, 2) == 3.0);
}

TEST_CASE("smooth field interpolates the lattice") {
  ShiftSpec spec = identity_spec(ShiftKind::SmoothField, 2, 2);
  spec.biases = {{0.0, 0, 0}, {1.0, 0, 0}, {2.0, 0, 0}, {3.0, 0, 0}};
  const Image out = apply_shift(Image(3, 3, 0.0), spec);
  CHECK(out.at(0, 0, 0) == 0.0);
  CHECK(out.at(0, 0, 2) == 1.0);
  CHECK(out.at(0, 2, 0) == 2.0);
  CHECK(out.at(0, 2, 2) == 3.0);
  CHECK(out.at(0, 1, 1) == doctest::Approx(1.5));
}

TEST_CASE("shift validation") {
  ShiftSpec spec = identity_spec(ShiftKind::GlobalAffine);
  spec.gains[0][1] = 0.0;
  CHECK_THROWS_AS(apply_shift(Image(2, 2), spec), ConfigError);
  spec.gains[0][1] = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK_THROWS_AS(identity_spec(ShiftKind::SmoothField, 1, 4), ConfigError);
  CHECK_THROWS_AS(identity_spec(ShiftKind::GlobalAffine, 2, 1), ConfigError);
  CHECK_THROWS_AS(random_spec(ShiftKind::GlobalAffine, 4, 4, 1, 0.0), ConfigError);
  CHECK_THROWS_AS(random_spec(ShiftKind::GlobalAffine, 4, 4, 1, 1.5), ConfigError);
  CHECK_NOTHROW(random_spec(ShiftKind::GlobalAffine, 4, 4, 1, 1.0));
}

TEST_CASE("random specs are deterministic and in range") {
  for (auto kind : {ShiftKind::GlobalAffine, ShiftKind::BlockAffine, ShiftKind::SmoothField}) {
    const ShiftSpec a = random_spec(kind, 32, 32, 77, 0.6);
    const ShiftSpec b = random_spec(kind, 32, 32, 77, 0.6);
    CHECK(a == b);
    CHECK(a.rows == default_rows(kind));
    for (const auto& g : a.gains)
      for (double v : g) CHECK((v >= 0.7 && v <= 1.3));
    for (const auto& bias : a.biases)
      for (double v : bias) CHECK((v >= -0.12 && v <= 0.12));
  }
  const ShiftSpec tiny = random_spec(ShiftKind::BlockAffine, 8, 8, 3, 1e-9);
  for (const auto& g : tiny.gains)
    for (double v : g) CHECK(std::abs(v - 1.0) <= 1e-9);
  for (const auto& b : tiny.biases)
    for (double v : b) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("different seeds give different specs") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    CHECK(random_spec(ShiftKind::GlobalAffine, 8, 8, s, 0.5) !=
          random_spec(ShiftKind::GlobalAffine, 8, 8, s + 1000, 0.5));
  }
}

TEST_CASE("property: shifts invert analytically") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto kind = static_cast<ShiftKind>(trial % 3);
    const Image img = random_image(10 + trial, 12, rng.next());
    const ShiftSpec spec = random_spec(kind, img.height(), img.width(), rng.next(), rng.uniform(0.01, 1.0));
    CHECK(max_abs_diff(invert_shift(apply_shift(img, spec), spec), img) <= 1e-12);
  }
}

TEST_CASE("property: adain exactly undoes a global affine shift") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Image x = random_image(12, 12, seed + 500);
    const ShiftSpec spec = random_spec(ShiftKind::GlobalAffine, 12, 12, seed, 1.0);
    CHECK(max_abs_diff(adain(apply_shift(x, spec), x), x) <= 1e-9);
  }
}

TEST_CASE("spec JSON round-trips exactly") {
  ShiftSpec spec = random_spec(ShiftKind::SmoothField, 20, 30, 12345, 0.37, 3, 5);
  spec.label = RetouchLabel::from_values({1, 0, 3});
  const auto j = to_json(spec);
  CHECK(j.at("kind") == "smooth_field");
  CHECK(j.at("grid").at("rows") == 3);
  const ShiftSpec back = shift_spec_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == spec);
  CHECK_THROWS_AS(shift_spec_from_json(nlohmann::json{{"kind", "global"}}), ConfigError);
}

TEST_CASE("retouch labels have three degrees in 0..3") {
  CHECK(RetouchLabel::from_values({3, 1, 0}).degrees[0] == 3);
  CHECK_THROWS_AS(RetouchLabel::from_values({1, 2}), ConfigError);
  CHECK_THROWS_AS(RetouchLabel::from_values({1, 2, 4}), ConfigError);
  CHECK_THROWS_AS(RetouchLabel::from_values({-1, 0, 0}), ConfigError);
}

TEST_CASE("kind names") {
  CHECK(parse_shift_kind("global") == ShiftKind::GlobalAffine);
  CHECK(parse_shift_kind("block_affine") == ShiftKind::BlockAffine);
  CHECK(parse_shift_kind("smooth") == ShiftKind::SmoothField);
  CHECK_THROWS_AS(parse_shift_kind("wobbly"), ConfigError);
}

TEST_CASE("synthetic fixtures are deterministic and textured") {
  const Image a = synthetic_image(40, 30, 9);
  CHECK(testing::bit_identical(a, synthetic_image(40, 30, 9)));
  CHECK_FALSE(testing::bit_identical(a, synthetic_image(40, 30, 10)));
  for (double v : a.data()) CHECK((v >= 0.05 - 1e-12 && v <= 0.95 + 1e-12));
  const auto s = channel_stats(a, {0, 0, 4, 4});
  for (double sd : s.sigma) CHECK(sd > 1e-3);
}
