#include "hadain/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hadain/error.hpp"

namespace hadain {

double psnr(const Image& a, const Image& b, double peak) {
  require_same_shape(a, b, "psnr");
  const auto da = a.data();
  const auto db = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = da[i] - db[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(da.size());
  if (mse < kPsnrMseFloor) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(peak * peak / mse));
}

std::vector<double> luma(const Image& img) {
  std::vector<double> y(img.plane_size());
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return y;
}

std::array<double, kSsimWindow> ssim_taps() {
  std::array<double, kSsimWindow> taps{};
  double sum = 0.0;
  constexpr int half = kSsimWindow / 2;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - half;
    taps[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += taps[i];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

namespace {

// Valid-mode separable Gaussian filter: (h - 10) x (w - 10) output.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t h,
                                 std::size_t w,
                                 const std::array<double, kSsimWindow>& taps) {
  const std::size_t oh = h - kSsimWindow + 1;
  const std::size_t ow = w - kSsimWindow + 1;
  std::vector<double> tmp(h * ow);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) s += taps[k] * src[r * w + x + k];
      tmp[r * ow + x] = s;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) s += taps[k] * tmp[(r + k) * ow + x];
      out[r * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (a.height() < kSsimWindow || a.width() < kSsimWindow) {
    throw ShapeError("ssim needs images of at least 11x11, got " +
                     std::to_string(a.height()) + "x" + std::to_string(a.width()));
  }
  const std::size_t h = a.height();
  const std::size_t w = a.width();
  const auto ya = luma(a);
  const auto yb = luma(b);
  std::vector<double> aa(ya.size()), bb(ya.size()), ab(ya.size());
  for (std::size_t i = 0; i < ya.size(); ++i) {
    aa[i] = ya[i] * ya[i];
    bb[i] = yb[i] * yb[i];
    ab[i] = ya[i] * yb[i];
  }
  const auto taps = ssim_taps();
  const auto mu_a = filter_valid(ya, h, w, taps);
  const auto mu_b = filter_valid(yb, h, w, taps);
  const auto e_aa = filter_valid(aa, h, w, taps);
  const auto e_bb = filter_valid(bb, h, w, taps);
  const auto e_ab = filter_valid(ab, h, w, taps);

  constexpr double c1 = (kSsimK1 * 1.0) * (kSsimK1 * 1.0);
  constexpr double c2 = (kSsimK2 * 1.0) * (kSsimK2 * 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma2 = mu_a[i] * mu_a[i];
    const double mb2 = mu_b[i] * mu_b[i];
    const double mab = mu_a[i] * mu_b[i];
    const double va = e_aa[i] - ma2;
    const double vb = e_bb[i] - mb2;
    const double cov = e_ab[i] - mab;
    const double num = (2.0 * mab + c1) * (2.0 * cov + c2);
    const double den = (ma2 + mb2 + c1) * (va + vb + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

StatDistance stat_distance(const Image& a, const Image& b) {
  require_same_shape(a, b, "stat_distance");
  const auto sa = channel_stats(a);
  const auto sb = channel_stats(b);
  StatDistance d;
  for (std::size_t c = 0; c < kChannels; ++c) {
    d[c] = {std::abs(sa.mu[c] - sb.mu[c]), std::abs(sa.sigma[c] - sb.sigma[c])};
  }
  return d;
}

namespace {

// edge[i] is true when a patch edge lies between pixel i - 1 and pixel i.
std::vector<bool> interior_edges(std::size_t extent, std::size_t patch,
                                 const std::vector<std::size_t>& anchors) {
  std::vector<bool> edge(extent, false);
  for (auto a : anchors) {
    if (a > 0) edge[a] = true;
    if (a + patch < extent) edge[a + patch] = true;
  }
  return edge;
}

}  // namespace

double seam_score(const Image& img, const PatchGrid& grid) {
  if (img.height() != grid.image_h || img.width() != grid.image_w) {
    throw ShapeError("seam_score: grid does not match image size");
  }
  const auto row_edge = interior_edges(grid.image_h, grid.patch_h, grid.row_anchors);
  const auto col_edge = interior_edges(grid.image_w, grid.patch_w, grid.col_anchors);
  double seam_sum = 0.0;
  double flat_sum = 0.0;
  std::size_t seam_n = 0;
  std::size_t flat_n = 0;
  auto tally = [&](bool on_edge, double d) {
    if (on_edge) {
      seam_sum += d;
      ++seam_n;
    } else {
      flat_sum += d;
      ++flat_n;
    }
  };
  for (std::size_t c = 0; c < kChannels; ++c) {
    for (std::size_t r = 0; r < img.height(); ++r) {
      for (std::size_t x = 1; x < img.width(); ++x) {
        tally(col_edge[x], std::abs(img.at(c, r, x) - img.at(c, r, x - 1)));
      }
    }
    for (std::size_t r = 1; r < img.height(); ++r) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        tally(row_edge[r], std::abs(img.at(c, r, x) - img.at(c, r - 1, x)));
      }
    }
  }
  if (seam_n == 0) return 0.0;
  const double seam_mean = seam_sum / static_cast<double>(seam_n);
  const double flat_mean = flat_n == 0 ? 0.0 : flat_sum / static_cast<double>(flat_n);
  return seam_mean - flat_mean;
}

MetricReport evaluate_pair(const Image& a, const Image& b, const PatchGrid* grid) {
  require_same_shape(a, b, "evaluate");
  MetricReport rep;
  rep.psnr_db = psnr(a, b);
  if (a.height() >= kSsimWindow && a.width() >= kSsimWindow) rep.ssim = ssim(a, b);
  rep.stat_distance = stat_distance(a, b);
  if (grid != nullptr) rep.seam_score = seam_score(a, *grid);
  return rep;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json j;
  j["psnr_db"] = report.psnr_db;
  j["ssim"] = report.ssim ? nlohmann::json(*report.ssim) : nlohmann::json(nullptr);
  constexpr const char* names[kChannels] = {"r", "g", "b"};
  nlohmann::json sd = nlohmann::json::object();
  for (std::size_t c = 0; c < kChannels; ++c) {
    sd[names[c]] = {{"dmu", report.stat_distance[c].dmu},
                    {"dsigma", report.stat_distance[c].dsigma}};
  }
  j["stat_distance"] = sd;
  if (report.seam_score) j["seam_score"] = *report.seam_score;
  return j;
}

}  // namespace hadain
