#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "binident/errors.hpp"
#include "binident/random.hpp"

namespace binident {

using ParamVector = Eigen::VectorXd;
using Regressor = Eigen::VectorXd;

// Noise-free output of the linear system: y_k = phi_k . theta.
inline double system_output(const Regressor& phi, const ParamVector& theta) {
  if (phi.size() != theta.size()) {
    throw ConfigError("system_output: regressor dimension " + std::to_string(phi.size()) +
                      " does not match parameter dimension " + std::to_string(theta.size()));
  }
  return phi.dot(theta);
}

// Convex compact constraint set with a closed-form nearest-point projection.
// Two geometries: an axis-aligned box centered at the origin and a euclidean
// ball. eta() is the largest norm attained on the set.
class ConstraintSet {
 public:
  enum class Kind { kBox, kBall };

  ConstraintSet() = default;  // empty until configured; valid() is false

  static ConstraintSet box(Eigen::VectorXd half_widths) {
    ConstraintSet s;
    s.kind_ = Kind::kBox;
    s.half_widths_ = std::move(half_widths);
    if (s.half_widths_.size() == 0 || !s.half_widths_.allFinite() ||
        (s.half_widths_.array() < 0.0).any()) {
      throw ValidationError({{"invalid_constraint", "box half-widths must be finite and nonnegative"}});
    }
    s.eta_ = s.half_widths_.norm();
    return s;
  }

  static ConstraintSet ball(Eigen::VectorXd center, double radius) {
    ConstraintSet s;
    s.kind_ = Kind::kBall;
    s.center_ = std::move(center);
    s.radius_ = radius;
    if (s.center_.size() == 0 || !s.center_.allFinite() || !(radius >= 0.0) ||
        !std::isfinite(radius)) {
      throw ValidationError({{"invalid_constraint", "ball requires a finite center and a nonnegative radius"}});
    }
    s.eta_ = s.center_.norm() + radius;
    return s;
  }

  bool valid() const { return dim() > 0; }
  Kind kind() const { return kind_; }

  int dim() const {
    return static_cast<int>(kind_ == Kind::kBox ? half_widths_.size() : center_.size());
  }

  // sup of the norm over the set
  double eta() const { return eta_; }

  bool origin_symmetric() const {
    return kind_ == Kind::kBox || center_.isZero(0.0);
  }

  void project_in_place(Eigen::VectorXd& x) const {
    if (kind_ == Kind::kBox) {
      x = x.cwiseMax(-half_widths_).cwiseMin(half_widths_);
    } else {
      const double dist = (x - center_).norm();
      if (dist > radius_) x = center_ + (x - center_) * (radius_ / dist);
    }
  }

  Eigen::VectorXd project(Eigen::VectorXd x) const {
    project_in_place(x);
    return x;
  }

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    if (kind_ == Kind::kBox) return (x.array().abs() <= half_widths_.array() + tol).all();
    return (x - center_).norm() <= radius_ + tol;
  }

 private:
  Kind kind_ = Kind::kBox;
  Eigen::VectorXd half_widths_;
  Eigen::VectorXd center_;
  double radius_ = 0.0;
  double eta_ = 0.0;
};

// Regressor source. Shift-register modes produce
// phi_k = (u_k, u_{k-1}, ..., u_{k-d+1}) from an i.i.d. scalar stream
// (gaussian or uniform); the fixed mode replays a supplied list cyclically.
class RegressorGenerator {
 public:
  enum class Mode { kGaussianShift, kUniformShift, kFixedSequence };

  static RegressorGenerator gaussian_shift_register(int dim, double variance) {
    if (dim < 1 || !(variance >= 0.0) || !std::isfinite(variance)) {
      throw ValidationError({{"invalid_regressor", "gaussian shift register needs dim >= 1 and variance >= 0"}});
    }
    RegressorGenerator g;
    g.mode_ = Mode::kGaussianShift;
    g.dim_ = dim;
    g.scale_ = std::sqrt(variance);
    g.window_.assign(static_cast<std::size_t>(dim), 0.0);
    return g;
  }

  static RegressorGenerator uniform_shift_register(int dim, double half_width) {
    if (dim < 1 || !(half_width >= 0.0) || !std::isfinite(half_width)) {
      throw ValidationError({{"invalid_regressor", "uniform shift register needs dim >= 1 and half_width >= 0"}});
    }
    RegressorGenerator g;
    g.mode_ = Mode::kUniformShift;
    g.dim_ = dim;
    g.scale_ = half_width;
    g.window_.assign(static_cast<std::size_t>(dim), 0.0);
    return g;
  }

  static RegressorGenerator fixed_sequence(std::vector<Eigen::VectorXd> sequence) {
    if (sequence.empty()) {
      throw ValidationError({{"invalid_regressor", "fixed sequence must contain at least one regressor"}});
    }
    const auto d = sequence.front().size();
    for (const auto& v : sequence) {
      if (v.size() != d || !v.allFinite()) {
        throw ValidationError({{"invalid_regressor", "fixed sequence entries must be finite and share one dimension"}});
      }
    }
    RegressorGenerator g;
    g.mode_ = Mode::kFixedSequence;
    g.dim_ = static_cast<int>(d);
    g.sequence_ = std::move(sequence);
    return g;
  }

  Mode mode() const { return mode_; }
  int dim() const { return dim_; }

  // Warm-up: fills the d-1 past taps, oldest first, consuming d-1 scalar
  // draws. Fixed sequences rewind instead.
  void reset(RandomStream& rng) {
    pos_ = 0;
    if (mode_ == Mode::kFixedSequence) return;
    for (int i = dim_ - 1; i >= 1; --i) window_[static_cast<std::size_t>(i)] = draw(rng);
  }

  // Advances the register by one step; consumes exactly one scalar draw in
  // the shift modes.
  void next(RandomStream& rng, Regressor& out) {
    if (mode_ == Mode::kFixedSequence) {
      out = sequence_[pos_];
      pos_ = (pos_ + 1) % sequence_.size();
      return;
    }
    for (int i = dim_ - 1; i >= 1; --i) {
      window_[static_cast<std::size_t>(i)] = window_[static_cast<std::size_t>(i - 1)];
    }
    window_[0] = draw(rng);
    if (out.size() != dim_) out.resize(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = window_[static_cast<std::size_t>(i)];
  }

  Regressor next(RandomStream& rng) {
    Regressor out(dim_);
    next(rng, out);
    return out;
  }

 private:
  double draw(RandomStream& rng) {
    return mode_ == Mode::kGaussianShift ? scale_ * rng.gaussian()
                                         : rng.uniform(-scale_, scale_);
  }

  Mode mode_ = Mode::kGaussianShift;
  int dim_ = 0;
  double scale_ = 0.0;  // sqrt(variance) for gaussian, half-width for uniform
  std::vector<double> window_;
  std::vector<Eigen::VectorXd> sequence_;
  std::size_t pos_ = 0;
};

}  // namespace binident
