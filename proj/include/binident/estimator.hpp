#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>

#include "binident/channel.hpp"
#include "binident/config.hpp"
#include "binident/privacy.hpp"
#include "binident/sysmodel.hpp"
#include "binident/trajectory.hpp"

namespace binident {

// Decreasing step sizes b_k = scale / k^exponent. exponent in (0, 1] keeps
// the series divergent; square_summable() reports the extra condition the
// almost-sure convergence claim needs.
struct StepSchedule {
  double scale = 1.0;
  double exponent = 1.0;

  double at(std::int64_t k) const {
    return exponent == 1.0 ? scale / static_cast<double>(k)
                           : scale / std::pow(static_cast<double>(k), exponent);
  }
  bool square_summable() const { return exponent > 0.5; }
};

inline double step_size(const StepSchedule& schedule, std::int64_t k) { return schedule.at(k); }

struct GainConfig {
  double beta = 0.0;
  enum class Mode { kPrivate, kPlain } mode = Mode::kPrivate;
};

// Bias-corrected innovation for the noised pipeline:
//   beta (1 - (p+q)) ((1 - (p+q)) F(0) + q - s).
// Bounded by beta in magnitude for any p, q in [0, 1].
inline double innovation_private(int s, const GainConfig& gain, const ChannelParams& ch, double f0) {
  const double a = ch.attenuation();
  return gain.beta * a * (a * f0 + ch.q - static_cast<double>(s));
}

// No-noise variant: beta (1 - (p+q)) (q - s).
inline double innovation_plain(int s, const GainConfig& gain, const ChannelParams& ch) {
  return gain.beta * ch.attenuation() * (ch.q - static_cast<double>(s));
}

struct EstimatorState {
  Eigen::VectorXd theta_hat;
  std::int64_t k = 1;
};

// One projected recursion step: theta <- project(theta + b_k s~ phi).
inline EstimatorState update(const EstimatorState& state, const Regressor& phi, double s_tilde,
                             double b_k, const ConstraintSet& omega) {
  EstimatorState next;
  next.theta_hat = state.theta_hat + (b_k * s_tilde) * phi;
  omega.project_in_place(next.theta_hat);
  next.k = state.k + 1;
  return next;
}

struct GainCheck {
  bool satisfied = false;
  double threshold = 0.0;
  GainConfig::Mode mode = GainConfig::Mode::kPrivate;
};

// Gain threshold for the O(1/k) mean-square rate; the inequality is strict.
// With noise: beta > 1 / (2 (1-p-q)^2 density_floor excitation_floor);
// without:   beta > set_radius regressor_bound / (2 excitation_floor (1-p-q)^2).
inline GainCheck check_gain_condition(const GainConfig& gain, const ChannelParams& ch,
                                      const RateConditions& rc) {
  if (!(rc.density_floor > 0.0) || !(rc.excitation_floor > 0.0) || !(rc.regressor_bound > 0.0) ||
      !(rc.set_radius > 0.0)) {
    throw DomainError("check_gain_condition: rate-condition constants must be positive");
  }
  const double a2 = ch.attenuation() * ch.attenuation();
  const double threshold =
      gain.mode == GainConfig::Mode::kPrivate
          ? 1.0 / (2.0 * a2 * rc.density_floor * rc.excitation_floor)
          : rc.set_radius * rc.regressor_bound / (2.0 * rc.excitation_floor * a2);
  return {gain.beta > threshold, threshold, gain.mode};
}

// Per-step observation hook for property tests and diagnostics. References
// are only valid inside the callback.
struct StepTrace {
  std::int64_t k;
  double b_k;
  const Regressor& phi;
  double s_tilde;
  const Eigen::VectorXd& theta_before;
  const Eigen::VectorXd& theta_after;
};
using StepObserver = std::function<void(const StepTrace&)>;

// One seeded run of the recursive projection estimator.
//
// Stream layout (the estimation center is agent 0, stream seed
// derive_seed(trial_seed, 0)): the generator warm-up, then per step one
// scalar regressor draw, one noise draw in private mode, and one attack draw.
// The run is bit-deterministic in (config, trial_seed).
inline TrialTrajectory run_estimator(const ExperimentConfig& config_in, std::uint64_t trial_seed,
                                     const StepObserver& observer = {}) {
  ExperimentConfig config = config_in;
  validate(config);
  const auto started = std::chrono::steady_clock::now();

  const int d = config.dim();
  const bool is_private = config.is_private();
  const NoiseModel noise = config.noise_model();
  const ChannelParams ch = config.channel;
  const GainConfig gain{config.algorithm.gain,
                        is_private ? GainConfig::Mode::kPrivate : GainConfig::Mode::kPlain};
  const StepSchedule schedule{config.algorithm.step_scale, config.algorithm.step_exponent};
  const ConstraintSet omega = config.constraint.build();
  const Eigen::VectorXd& theta = config.system.theta;

  RandomStream rng(derive_seed(trial_seed, 0));
  RegressorGenerator gen = config.system.regressor.build(d);
  gen.reset(rng);

  TrialTrajectory out;
  out.seed = trial_seed;
  out.mode = is_private ? "private" : "plain";
  out.ks = log_grid(config.algorithm.steps, config.algorithm.log_every_step);
  out.err_sq.reserve(out.ks.size());

  Eigen::VectorXd theta_hat = config.algorithm.theta_init;
  Eigen::VectorXd next(d);
  Regressor phi(d);

  out.err_sq.push_back((theta_hat - theta).squaredNorm());
  std::size_t grid_pos = 1;  // ks[0] == 1 recorded above

  for (std::int64_t k = 1; k <= config.algorithm.steps; ++k) {
    gen.next(rng, phi);
    double measured = phi.dot(theta);
    if (is_private) measured += sample_noise(noise, rng);
    const int sensed = binary_quantize(measured, phi.dot(theta_hat));
    const int received = tamper(sensed, ch, rng);
    const double s_tilde = is_private ? innovation_private(received, gain, ch, noise.cdf_at_zero)
                                      : innovation_plain(received, gain, ch);
    const double b_k = schedule.at(k);
    next = theta_hat + (b_k * s_tilde) * phi;
    omega.project_in_place(next);
    if (observer) observer(StepTrace{k, b_k, phi, s_tilde, theta_hat, next});
    theta_hat.swap(next);
    if (grid_pos < out.ks.size() && out.ks[grid_pos] == k + 1) {
      out.err_sq.push_back((theta_hat - theta).squaredNorm());
      ++grid_pos;
    }
  }

  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace binident
