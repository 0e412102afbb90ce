#pragma once

// Brute-force feasibility oracle for small systems, restricted to the bounding
// ball ||x|| <= R. It shares no numerical code with the solver: candidate
// points come from its own Gaussian elimination and are checked directly.
//
// Vertex pass: for every subset of at most n rows, the minimum-norm point of
// the affine set where those rows are tight. The minimum-norm point of a
// nonempty polyhedron is one of these, so a feasible region that meets the
// ball always produces a candidate inside it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ellipsoid/errors.hpp"
#include "ellipsoid/linalg.hpp"
#include "ellipsoid/solver.hpp"

namespace ellipsoid {

struct FeasibleWitness {
  Vector point;
};

struct Infeasible {};

struct Inconclusive {
  std::string reason;
};

using OracleVerdict = std::variant<FeasibleWitness, Infeasible, Inconclusive>;

inline constexpr std::size_t kOracleMaxDim = 4;
inline constexpr std::size_t kOracleMaxRows = 20;
inline constexpr std::size_t kGridMaxDim = 3;
/// Grid step R/200 per axis.
inline constexpr std::size_t kOracleGridSteps = 401;
inline constexpr double kOracleSlack = 1e-12;
inline constexpr double kOracleInteriorNudge = 1e-7;

namespace oracle_detail {

inline bool inside_ball(std::span<const double> x, double radius) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s <= radius * radius * (1.0 + kOracleSlack);
}

inline bool satisfies_all(const LinearSystem& sys, std::span<const double> x) {
  for (const auto& c : sys.constraints()) {
    double ax = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) ax += c.normal[j] * x[j];
    if (ax - c.bound < -kOracleSlack * (1.0 + std::abs(c.bound))) return false;
  }
  return true;
}

inline bool acceptable(const LinearSystem& sys, const Vector& x) {
  return x.all_finite() && inside_ball(x.values(), sys.radius()) && satisfies_all(sys, x.values());
}

// Solves the k x k system g y = rhs in place by elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_dense(std::vector<double> g, std::vector<double> rhs,
                                                      std::size_t k) {
  double scale = 0.0;
  for (double v : g) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(g[r * k + col]) > std::abs(g[piv * k + col])) piv = r;
    }
    if (std::abs(g[piv * k + col]) <= 1e-12 * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(g[piv * k + c], g[col * k + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = g[r * k + col] / g[col * k + col];
      for (std::size_t c = col; c < k; ++c) g[r * k + c] -= f * g[col * k + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> y(k);
  for (std::size_t r = k; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t c = r + 1; c < k; ++c) s -= g[r * k + c] * y[c];
    y[r] = s / g[r * k + r];
  }
  return y;
}

// Minimum-norm point of {x : a_j'x = b_j for j in rows}: x = A'(AA')^{-1} b.
inline std::optional<Vector> min_norm_point(const LinearSystem& sys, const std::vector<std::size_t>& rows) {
  const auto& cs = sys.constraints();
  const std::size_t k = rows.size();
  const std::size_t n = sys.dim();
  std::vector<double> gram(k * k);
  std::vector<double> rhs(k);
  for (std::size_t r = 0; r < k; ++r) {
    rhs[r] = cs[rows[r]].bound;
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += cs[rows[r]].normal[j] * cs[rows[c]].normal[j];
      gram[r * k + c] = s;
    }
  }
  auto y = solve_dense(std::move(gram), std::move(rhs), k);
  if (!y) return std::nullopt;
  Vector x = Vector::zeros(n);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < n; ++j) x[j] += (*y)[r] * cs[rows[r]].normal[j];
  }
  return x;
}

// Pushes x by nudge * R along the mean unit normal of the rows tight at x.
inline Vector nudge_inward(const LinearSystem& sys, const Vector& x) {
  const std::size_t n = sys.dim();
  Vector dir = Vector::zeros(n);
  for (const auto& c : sys.constraints()) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += c.normal[j] * x[j];
    if (std::abs(ax - c.bound) <= 1e-9 * (1.0 + std::abs(c.bound))) {
      const double len = norm(c.normal);
      for (std::size_t j = 0; j < n; ++j) dir[j] += c.normal[j] / len;
    }
  }
  const double len = norm(dir);
  if (!(len > 0.0)) return x;
  return x + (kOracleInteriorNudge * sys.radius() / len) * dir;
}

inline std::optional<Vector> try_candidate(const LinearSystem& sys, const Vector& x) {
  const Vector nudged = nudge_inward(sys, x);
  if (acceptable(sys, nudged)) return nudged;
  if (acceptable(sys, x)) return x;
  return std::nullopt;
}

template <typename Visit>
bool for_each_subset(std::size_t m, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (visit(idx)) return true;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace oracle_detail

/// Scans the grid over [-R, R]^n (points outside the ball skipped) for a feasible point.
/// A miss is Inconclusive, never Infeasible.
inline OracleVerdict grid_feasibility_scan(const LinearSystem& sys, std::size_t steps_per_axis) {
  const std::size_t n = sys.dim();
  if (n > kGridMaxDim) throw usage_error("grid_feasibility_scan: dimension must be at most 3");
  if (steps_per_axis < 2) throw usage_error("grid_feasibility_scan: need at least 2 steps per axis");

  const double r = sys.radius();
  const double last = static_cast<double>(steps_per_axis - 1);
  std::array<std::size_t, kGridMaxDim> idx{};
  std::array<double, kGridMaxDim> point{};
  while (true) {
    for (std::size_t j = 0; j < n; ++j) point[j] = -r + 2.0 * r * static_cast<double>(idx[j]) / last;
    const std::span<const double> x(point.data(), n);
    if (oracle_detail::inside_ball(x, r) && oracle_detail::satisfies_all(sys, x)) {
      return FeasibleWitness{Vector(std::vector<double>(x.begin(), x.end()))};
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == steps_per_axis) idx[j++] = 0;
    if (j == n) break;
  }
  return Inconclusive{"no grid witness"};
}

/// Vertex pass, then (n <= 3) a grid pass with step R/200. Infeasible only when both miss.
inline OracleVerdict vertex_enumeration_check(const LinearSystem& sys) {
  const std::size_t n = sys.dim();
  const std::size_t m = sys.constraints().size();
  if (n > kOracleMaxDim) throw usage_error("vertex_enumeration_check: dimension must be at most 4");
  if (m > kOracleMaxRows) throw usage_error("vertex_enumeration_check: at most 20 constraints supported");

  if (auto w = oracle_detail::try_candidate(sys, Vector::zeros(n))) return FeasibleWitness{*w};

  for (std::size_t k = 1; k <= std::min(n, m); ++k) {
    std::optional<Vector> found;
    oracle_detail::for_each_subset(m, k, [&](const std::vector<std::size_t>& rows) {
      if (auto x = oracle_detail::min_norm_point(sys, rows)) found = oracle_detail::try_candidate(sys, *x);
      return found.has_value();
    });
    if (found) return FeasibleWitness{*found};
  }

  // Where each row's inward normal ray meets the sphere, pulled slightly inside.
  for (const auto& c : sys.constraints()) {
    const Vector x = ((1.0 - kOracleInteriorNudge) * sys.radius() / norm(c.normal)) * c.normal;
    if (oracle_detail::acceptable(sys, x)) return FeasibleWitness{x};
  }

  if (n > kGridMaxDim) return Inconclusive{"vertex pass found no witness; grid pass needs n <= 3"};
  auto grid = grid_feasibility_scan(sys, kOracleGridSteps);
  if (std::holds_alternative<FeasibleWitness>(grid)) return grid;
  return Infeasible{};
}

}  // namespace ellipsoid
