#pragma once

#include "hadain/image.hpp"

namespace hadain {

inline constexpr double kDefaultEps = 1e-6;

// Per-channel moment matching of `content` onto `reference`:
//   out = mu_ref + sigma_ref * (content - mu_content) / sigma_content
// A channel of `content` with sigma below `eps` becomes the constant mu_ref.
// No clamping. Throws ShapeError on size mismatch, ConfigError if eps <= 0.
Image adain(const Image& content, const Image& reference, double eps = kDefaultEps);

// Statistics pair that fully determines one adain application.
struct AdainMap {
  ChannelStats content;
  ChannelStats reference;
  double eps = kDefaultEps;
};

// The single-sample transfer used by adain. Every caller that needs results
// bit-identical to adain() goes through this function.
inline double adain_sample(const AdainMap& m, std::size_t c, double v) noexcept {
  if (m.content.sigma[c] < m.eps) return m.reference.mu[c];
  return m.reference.mu[c] +
         m.reference.sigma[c] * (v - m.content.mu[c]) / m.content.sigma[c];
}

void require_valid_eps(double eps);

}  // namespace hadain
