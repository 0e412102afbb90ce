#pragma once

// Linear feasibility by the ellipsoid method: start from a ball of radius R,
// cut through the center with the first violated row, stop when the center is
// feasible or the ellipsoid's volume drops below epsilon.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ellipsoid/ellipsoid.hpp"
#include "ellipsoid/errors.hpp"
#include "ellipsoid/linalg.hpp"

namespace ellipsoid {

/// a'x >= b. Rows given as <= are negated before they get here.
struct Constraint {
  Vector normal;
  double bound = 0.0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

class LinearSystem {
 public:
  LinearSystem(std::size_t dim, std::vector<Constraint> constraints, double radius)
      : dim_(dim), constraints_(std::move(constraints)), radius_(radius) {
    if (dim_ == 0) throw usage_error("LinearSystem: dimension must be at least 1");
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
      throw usage_error("LinearSystem: radius must be positive and finite");
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      const auto& c = constraints_[i];
      const std::string where = "LinearSystem: constraint " + std::to_string(i);
      if (c.normal.size() != dim_) throw usage_error(where + " has the wrong length");
      if (!c.normal.all_finite() || !std::isfinite(c.bound)) throw usage_error(where + " is not finite");
      if (!(norm(c.normal) > kCutNormFloor)) throw usage_error(where + " has a zero normal");
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  double radius() const noexcept { return radius_; }

 private:
  std::size_t dim_;
  std::vector<Constraint> constraints_;
  double radius_;
};

/// One record per visited center.
struct TraceRecord {
  std::size_t iter = 0;
  std::optional<std::size_t> violated_index;
  Vector center;
  double log_volume = 0.0;
  /// a'Ka for the violated row; empty when the center was feasible.
  std::optional<double> cut_quadratic_form;
};

using TraceSink = std::function<void(const TraceRecord&, const EllipsoidState&)>;

inline constexpr double kDefaultViolationTolerance = 1e-9;

struct SolverConfig {
  /// Absolute n-volume threshold.
  double epsilon = 1e-8;
  /// Defaults to iteration_cap(n, ln V0, epsilon).
  std::optional<std::size_t> max_iterations;
  /// Row i counts as satisfied when a'x >= b - violation_tolerance * (1 + |b|).
  double violation_tolerance = kDefaultViolationTolerance;
  TraceSink trace;
};

struct Feasible {
  Vector point;
  std::size_t iterations = 0;
};

struct VolumeExhausted {
  double final_log_volume = 0.0;
  std::size_t iterations = 0;
};

struct IterationCapReached {
  std::size_t iterations = 0;
};

using SolveOutcome = std::variant<Feasible, VolumeExhausted, IterationCapReached>;

inline double row_tolerance(double tol, double bound) { return tol * (1.0 + std::abs(bound)); }

struct Violation {
  std::size_t index;
  const Constraint* constraint;
};

/// Lowest-index row with a'x < b - tol * (1 + |b|).
inline std::optional<Violation> find_violated(const LinearSystem& sys, const Vector& x, double tol) {
  detail::require_same_size(sys.dim(), x.size(), "find_violated");
  const auto& rows = sys.constraints();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dot(rows[i].normal, x) < rows[i].bound - row_tolerance(tol, rows[i].bound)) {
      return Violation{i, &rows[i]};
    }
  }
  return std::nullopt;
}

/// ceil(2(n+1) * (ln V0 - ln epsilon)), at least 1.
inline std::size_t iteration_cap(std::size_t n, double log_v0, double epsilon) {
  if (!(epsilon > 0.0)) throw usage_error("iteration_cap: epsilon must be positive");
  const double x = 2.0 * (static_cast<double>(n) + 1.0) * (log_v0 - std::log(epsilon));
  // Absorb rounding in ln V0 - ln epsilon so exact integers do not round up.
  const double c = std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
  if (!(c >= 1.0)) return 1;
  if (c >= static_cast<double>(std::numeric_limits<std::size_t>::max())) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(c);
}

namespace detail {

// One-dimensional central cut: keep the half of the interval on the feasible side.
inline EllipsoidState bisect(const EllipsoidState& e, const Vector& normal) {
  const double half = std::sqrt(e.shape()(0, 0));
  const double c = e.center()[0];
  const double next_center = normal[0] > 0.0 ? c + 0.5 * half : c - 0.5 * half;
  return EllipsoidState(Vector{next_center}, SymmetricMatrix::scaled_identity(1, 0.25 * half * half),
                        e.log_volume() - std::numbers::ln2);
}

}  // namespace detail

inline SolveOutcome solve(const LinearSystem& sys, const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw usage_error("solve: epsilon must be positive");
  if (!(cfg.violation_tolerance >= 0.0)) throw usage_error("solve: violation tolerance must be non-negative");

  const std::size_t n = sys.dim();
  const double log_eps = std::log(cfg.epsilon);
  EllipsoidState state = ball(n, sys.radius(), Vector::zeros(n));
  const std::size_t cap = cfg.max_iterations.value_or(iteration_cap(n, state.log_volume(), cfg.epsilon));

  for (std::size_t iter = 0;; ++iter) {
    const auto hit = find_violated(sys, state.center(), cfg.violation_tolerance);
    if (cfg.trace) {
      TraceRecord rec{iter, std::nullopt, state.center(), state.log_volume(), std::nullopt};
      if (hit) {
        rec.violated_index = hit->index;
        rec.cut_quadratic_form = quadratic_form(state.shape(), hit->constraint->normal);
      }
      cfg.trace(rec, state);
    }
    if (!hit) return Feasible{state.center(), iter};
    if (state.log_volume() < log_eps) return VolumeExhausted{state.log_volume(), iter};
    if (iter >= cap) return IterationCapReached{iter};

    try {
      state = n == 1 ? detail::bisect(state, hit->constraint->normal)
                     : central_cut_update(state, Cut{hit->constraint->normal, hit->index});
    } catch (const degenerate_cut_error& e) {
      throw numerical_breakdown(iter, e.what());
    } catch (const pd_lost_error& e) {
      throw numerical_breakdown(iter, e.what());
    } catch (const not_pd_error& e) {
      throw numerical_breakdown(iter, e.what());
    }
  }
}

struct CertReport {
  bool passed = false;
  /// Smallest a'x - b over all rows (Feasible only; empty for a system without rows).
  std::optional<double> min_slack;
  std::optional<std::size_t> worst_index;
  /// ln epsilon - final log-volume (VolumeExhausted only); positive when certified.
  std::optional<double> log_volume_margin;
  std::string summary;
};

/// Independent re-check of an outcome against the system it came from.
inline CertReport certify(const SolveOutcome& outcome, const LinearSystem& sys, double epsilon,
                          double tol = kDefaultViolationTolerance) {
  CertReport report;
  if (const auto* f = std::get_if<Feasible>(&outcome)) {
    report.passed = f->point.size() == sys.dim() && f->point.all_finite();
    if (!report.passed) {
      report.summary = "feasible point has the wrong dimension or non-finite entries";
      return report;
    }
    const auto& rows = sys.constraints();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double slack = dot(rows[i].normal, f->point) - rows[i].bound;
      if (!report.min_slack || slack < *report.min_slack) {
        report.min_slack = slack;
        report.worst_index = i;
      }
      if (slack < -row_tolerance(tol, rows[i].bound)) report.passed = false;
    }
    report.summary = report.passed ? "all constraints satisfied"
                                   : "constraint " + std::to_string(*report.worst_index) + " violated";
  } else if (const auto* v = std::get_if<VolumeExhausted>(&outcome)) {
    report.log_volume_margin = std::log(epsilon) - v->final_log_volume;
    report.passed = *report.log_volume_margin > 0.0;
    report.summary = report.passed ? "final volume below epsilon" : "final volume not below epsilon";
  } else {
    report.passed = false;
    report.summary = "iteration cap reached without a conclusion";
  }
  return report;
}

}  // namespace ellipsoid
