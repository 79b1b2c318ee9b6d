#include "hadain/adain.hpp"

#include <cmath>
#include <string>

#include "hadain/error.hpp"

namespace hadain {

void require_valid_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ConfigError("eps must be a positive finite number, got " + std::to_string(eps));
  }
}

Image adain(const Image& content, const Image& reference, double eps) {
  require_same_shape(content, reference, "adain");
  require_valid_eps(eps);
  const AdainMap map{channel_stats(content), channel_stats(reference), eps};
  Image out(content.height(), content.width());
  for (std::size_t c = 0; c < kChannels; ++c) {
    const auto in = content.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < in.size(); ++i) dst[i] = adain_sample(map, c, in[i]);
  }
  return out;
}

}  // namespace hadain
