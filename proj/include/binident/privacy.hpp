#pragma once

#include <algorithm>
#include <cmath>

#include "binident/errors.hpp"
#include "binident/random.hpp"

namespace binident {

// (epsilon, delta) budget plus the adjacency bound: two measurements are
// adjacent when they differ by at most `sensitivity`.
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 0.0;

  // delta < 0.5 keeps the inverse tail quantile positive
  bool valid() const {
    return epsilon > 0.0 && std::isfinite(epsilon) && delta > 0.0 && delta < 0.5 &&
           sensitivity > 0.0 && std::isfinite(sensitivity);
  }
};

// Zero-mean gaussian noise. sigma == 0 degenerates to a point mass and is
// used only by the no-noise mode; cdf_at_zero is the F(0) = 1/2 value the
// private-mode innovation consumes.
struct NoiseModel {
  double sigma = 0.0;
  double cdf_at_zero = 0.5;
};

// Upper tail probability of the standard normal.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Inverse upper tail, by bisection on [-40, 40] to an argument tolerance of
// 1e-13 (tail probabilities outside that bracket underflow anyway).
inline double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("q_inverse: argument must lie in (0, 1)");
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_function(mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Closed-form gaussian-mechanism calibration:
//   sigma = (sensitivity / 2 eps) * (Qinv(delta) + sqrt(Qinv(delta)^2 + 2 eps)).
// Monotone decreasing in epsilon and delta, linear in the sensitivity.
inline NoiseModel calibrate_sigma(const PrivacyBudget& budget) {
  if (!budget.valid()) {
    throw ValidationError(
        {{"invalid_privacy_budget",
          "calibration requires epsilon > 0, delta in (0, 0.5), sensitivity > 0"}});
  }
  const double c = q_inverse(budget.delta);
  const double sigma =
      budget.sensitivity / (2.0 * budget.epsilon) * (c + std::sqrt(c * c + 2.0 * budget.epsilon));
  return NoiseModel{sigma, 0.5};
}

// One draw from N(0, sigma^2); consumes exactly one gaussian from the stream.
inline double sample_noise(const NoiseModel& model, RandomStream& rng) {
  return model.sigma * rng.gaussian();
}

// CDF of the noise. The degenerate sigma == 0 model is a unit step at 0.
inline double cdf(const NoiseModel& model, double x) {
  if (model.sigma == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / (model.sigma * std::sqrt(2.0)));
}

// Privacy violation of the scalar gaussian mechanism on the half-line output
// set (t, inf), for the worst adjacent pair (distance = sensitivity):
//   P(y + w > t) - e^eps P(y' + w > t)   with y - y' = sensitivity.
inline double dp_violation_at(const PrivacyBudget& budget, double sigma, double t) {
  return q_function((t - budget.sensitivity) / sigma) -
         std::exp(budget.epsilon) * q_function(t / sigma);
}

// Returns delta - sup_R [P(M(y) in R) - e^eps P(M(y') in R)]; nonnegative
// slack means the mechanism meets the budget. For the scalar gaussian
// mechanism the likelihood-ratio superlevel set is a half-line, so half-lines
// are the worst-case R and the sup reduces to a 1-D search. The violation is
// unimodal in the threshold (single likelihood-ratio crossing), hence the
// golden-section refinement converges to the sup.
inline double verify_dp_condition(const PrivacyBudget& budget, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("verify_dp_condition: sigma must be positive");
  const double delta_k = budget.sensitivity;
  // stationary point of the violation: likelihood ratio equals e^eps
  const double t_star = sigma * sigma * budget.epsilon / delta_k + 0.5 * delta_k;
  double a = std::min(-20.0 * sigma - delta_k, t_star - 20.0 * sigma);
  double b = std::max(20.0 * sigma + delta_k, t_star + 20.0 * sigma);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = dp_violation_at(budget, sigma, x1);
  double f2 = dp_violation_at(budget, sigma, x2);
  for (int i = 0; i < 300 && b - a > 1e-12 * (1.0 + std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = dp_violation_at(budget, sigma, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = dp_violation_at(budget, sigma, x1);
    }
  }
  const double achieved = std::max({f1, f2, dp_violation_at(budget, sigma, t_star)});
  return budget.delta - achieved;
}

}  // namespace binident
