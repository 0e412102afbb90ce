#pragma once

// Ellipsoid state {x : (x-c)' K^{-1} (x-c) <= 1} and the central-cut update.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "ellipsoid/errors.hpp"
#include "ellipsoid/linalg.hpp"

namespace ellipsoid {

/// a'Ka must exceed this before its square root is taken.
inline constexpr double kQuadraticFormFloor = 1e-300;
/// Smallest admissible cut normal length.
inline constexpr double kCutNormFloor = 1e-300;
/// Membership accepts (x-c)'K^{-1}(x-c) <= 1 + slack.
inline constexpr double kContainmentSlack = 1e-9;

/// ln of the volume of the unit n-ball, pi^{n/2} / Gamma(n/2 + 1).
inline double log_unit_ball_volume(std::size_t n) {
  const double half = 0.5 * static_cast<double>(n);
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

/// Exact log-volume change of one central cut in dimension n:
/// 0.5 * [n ln(n^2/(n^2-1)) + ln((n-1)/(n+1))], which never exceeds -1/(2(n+1)).
inline double step_log_ratio(std::size_t n) {
  if (n < 2) throw usage_error("step_log_ratio: dimension must be at least 2");
  const double d = static_cast<double>(n);
  // log1p keeps precision when n is large and n^2/(n^2-1) is close to 1.
  return 0.5 * (d * std::log1p(1.0 / (d * d - 1.0)) + std::log((d - 1.0) / (d + 1.0)));
}

struct Cut {
  Vector normal;
  /// Index of the originating constraint; nullopt for synthetic cuts.
  std::optional<std::size_t> source;
};

class EllipsoidState {
 public:
  EllipsoidState(Vector center, SymmetricMatrix shape, double log_volume)
      : center_(std::move(center)), shape_(std::move(shape)), log_volume_(log_volume) {
    detail::require_same_size(center_.size(), shape_.dim(), "EllipsoidState");
    if (center_.size() == 0) throw usage_error("EllipsoidState: dimension must be at least 1");
  }

  std::size_t dim() const noexcept { return center_.size(); }
  const Vector& center() const noexcept { return center_; }
  const SymmetricMatrix& shape() const noexcept { return shape_; }
  double log_volume() const noexcept { return log_volume_; }

  /// Recomputes the log-volume from scratch: ln V_n + 0.5 ln det K.
  double audited_log_volume() const { return log_unit_ball_volume(dim()) + 0.5 * log_det_pd(shape_); }

 private:
  Vector center_;
  SymmetricMatrix shape_;
  double log_volume_;
};

inline EllipsoidState ball(std::size_t n, double radius, const Vector& center) {
  if (n == 0) throw usage_error("ball: dimension must be at least 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw usage_error("ball: radius must be positive and finite");
  detail::require_same_size(n, center.size(), "ball");
  if (!center.all_finite()) throw usage_error("ball: center must be finite");
  const double r2 = radius * radius;
  if (!std::isfinite(r2)) throw usage_error("ball: radius squared overflows");
  return EllipsoidState(center, SymmetricMatrix::scaled_identity(n, r2),
                        log_unit_ball_volume(n) + static_cast<double>(n) * std::log(radius));
}

inline EllipsoidState unit_ball(std::size_t n) {
  if (n == 0) throw usage_error("unit_ball: dimension must be at least 1");
  return ball(n, 1.0, Vector::zeros(n));
}

/// Smallest ellipsoid containing {x in E : a'x >= a'c}. Requires n >= 2.
inline EllipsoidState central_cut_update(const EllipsoidState& e, const Cut& cut) {
  const std::size_t n = e.dim();
  if (n < 2) throw usage_error("central_cut_update: dimension must be at least 2");
  detail::require_same_size(n, cut.normal.size(), "central_cut_update");
  if (!(norm(cut.normal) > kCutNormFloor)) throw usage_error("central_cut_update: cut normal is zero");

  const Vector ka = mat_vec(e.shape(), cut.normal);
  const double q = dot(cut.normal, ka);
  if (!(q > kQuadraticFormFloor)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "central_cut_update: a'Ka = %.3g is not above the floor", q);
    throw degenerate_cut_error(buf);
  }

  const double d = static_cast<double>(n);
  Vector center = e.center() + (1.0 / ((d + 1.0) * std::sqrt(q))) * ka;
  SymmetricMatrix shape =
      rank1_downdate(e.shape(), ka, 2.0 / ((d + 1.0) * q)).scaled(d * d / (d * d - 1.0));

  if (!center.all_finite() || !shape.all_finite() || !cholesky(shape)) {
    throw pd_lost_error("central_cut_update: updated shape is not positive definite");
  }
  return EllipsoidState(std::move(center), std::move(shape), e.log_volume() + step_log_ratio(n));
}

/// Membership test through a Cholesky solve; K^{-1} is never formed.
inline bool contains(const EllipsoidState& e, const Vector& x) {
  detail::require_same_size(e.dim(), x.size(), "contains");
  const Vector offset = x - e.center();
  const Vector y = solve_pd(e.shape(), offset);
  return dot(offset, y) <= 1.0 + kContainmentSlack;
}

}  // namespace ellipsoid
