#pragma once

#include <cmath>

#include "binident/privacy.hpp"
#include "binident/random.hpp"

namespace binident {

// Bit-flip attack channel: a transmitted 1 flips to 0 with probability p, a
// transmitted 0 flips to 1 with probability q. At p + q == 1 the received bit
// distribution no longer depends on the parameter, so identification runs
// reject that point; channel-only analysis still allows it.
struct ChannelParams {
  double p = 0.0;
  double q = 0.0;

  double attenuation() const { return 1.0 - (p + q); }
  bool identifiable(double tol = 1e-12) const { return std::abs(p + q - 1.0) > tol; }
};

// 1 iff the (noised) measurement does not exceed the threshold; the boundary
// maps to 1 so fixed seeds stay deterministic.
inline int binary_quantize(double y_private, double threshold) {
  return y_private <= threshold ? 1 : 0;
}

// Passes one bit through the attack channel; consumes exactly one uniform.
inline int tamper(int bit, const ChannelParams& params, RandomStream& rng) {
  const double r = rng.uniform();
  if (bit == 1) return r < params.p ? 0 : 1;
  return r < params.q ? 1 : 0;
}

// Analytic mean of the received bit as a function of the threshold gap
// (threshold minus true output): (1 - (p + q)) F(gap) + q.
inline double channel_law(const ChannelParams& params, const NoiseModel& noise, double gap) {
  return params.attenuation() * cdf(noise, gap) + params.q;
}

}  // namespace binident
