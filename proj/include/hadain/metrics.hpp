#pragma once

#include <array>
#include <optional>

#include "json.hpp"

#include "hadain/image.hpp"
#include "hadain/patch_grid.hpp"

namespace hadain {

// PSNR reported when the MSE falls below kPsnrMseFloor.
inline constexpr double kPsnrCapDb = 99.0;
inline constexpr double kPsnrMseFloor = 1e-12;

// 10 log10(peak^2 / MSE) over all samples, capped at kPsnrCapDb.
double psnr(const Image& a, const Image& b, double peak = 1.0);

// SSIM parameters: 11x11 Gaussian window, sigma 1.5, K1 = 0.01, K2 = 0.03,
// dynamic range 1.0.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// Rec.601 luma of an RGB image.
std::vector<double> luma(const Image& img);

// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
std::array<double, kSsimWindow> ssim_taps();

// Mean SSIM of the luma planes over every fully-inside window position.
// Throws ShapeError on mismatch or when either side is below 11 pixels.
double ssim(const Image& a, const Image& b);

struct MomentGap {
  double dmu = 0.0;
  double dsigma = 0.0;
};
using StatDistance = std::array<MomentGap, kChannels>;

// |mu_a - mu_b| and |sigma_a - sigma_b| per channel over the whole image.
StatDistance stat_distance(const Image& a, const Image& b);

// Mean |first difference| across interior patch edges of `grid` minus the
// mean |first difference| over all other neighbouring pixel pairs. Zero for
// a grid without interior edges.
double seam_score(const Image& img, const PatchGrid& grid);

struct MetricReport {
  double psnr_db = 0.0;
  std::optional<double> ssim;  // absent when the image is below the window size
  StatDistance stat_distance{};
  std::optional<double> seam_score;
};

// psnr, ssim (when the image is large enough) and stat_distance; seam score
// on `grid` when one is given.
MetricReport evaluate_pair(const Image& a, const Image& b,
                           const PatchGrid* grid = nullptr);

// {psnr_db, ssim, stat_distance: {r, g, b: {dmu, dsigma}}, seam_score?}
nlohmann::json to_json(const MetricReport& report);

}  // namespace hadain
