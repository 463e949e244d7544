#pragma once

// Maximum of f(u) = ||u||_1 ||u||_inf on the unit sphere.
//
// By symmetry the maximum equals that of g(u) = u_1 (u_1 + ... + u_n) on the
// sphere, a quadratic form whose top eigenvalue is (sqrt(n)+1)/2. The
// maximizer has one large coordinate a and n-1 equal coordinates b:
//   a = sqrt((1 + 1/sqrt(n)) / 2),   b = 1 / (2 a sqrt(n)),
// which satisfies a^2 + (n-1) b^2 = 1 and the stationarity identity
// 2ab + (n-1) b^2 = a^2. numerical_max() recovers the same value by gradient
// ascent without using these formulas.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cubeshadow/errors.hpp"
#include "cubeshadow/geometry.hpp"
#include "cubeshadow/sphere_sampler.hpp"

namespace cubeshadow {

struct ExtremalResult {
  std::size_t n = 0;
  double max_value = 0.0;
  UnitVector maximizer;
  double achieved_value = 0.0;
  bool threshold_ok = false;
};

struct NumericalMax {
  double value = 0.0;
  UnitVector argmax;
  std::size_t starts = 0;
  std::size_t converged_starts = 0;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, NumericalMax best) : Error(what), best_(std::move(best)) {}
  const NumericalMax& best_so_far() const { return best_; }

 private:
  NumericalMax best_;
};

inline void require_dimension(std::size_t n) {
  if (n < 1) throw InvalidDimension("dimension must be >= 1");
}

inline double closed_form_max(std::size_t n) {
  require_dimension(n);
  return (std::sqrt(static_cast<double>(n)) + 1.0) / 2.0;
}

/// f(u) = ||u||_1 ||u||_inf.
inline double criterion_product(const UnitVector& u) {
  const Norms nm = norms(u);
  return nm.l1 * nm.linf;
}

inline UnitVector maximizer(std::size_t n) {
  require_dimension(n);
  const double rn = std::sqrt(static_cast<double>(n));
  const double a = std::sqrt((1.0 + 1.0 / rn) / 2.0);
  const double b = 1.0 / (2.0 * a * rn);
  std::vector<double> c(n, b);
  c[0] = a;
  return UnitVector::normalize(std::move(c));
}

/// Largest n with closed_form_max(n) <= 2, found by search.
inline std::size_t threshold_dimension() {
  std::size_t n = 1;
  while (closed_form_max(n + 1) <= 2.0) ++n;
  return n;
}

inline ExtremalResult extremal_result(std::size_t n) {
  const double m = closed_form_max(n);
  UnitVector u = maximizer(n);
  const double achieved = criterion_product(u);
  return ExtremalResult{n, m, std::move(u), achieved, m <= 2.0};
}

// g(u) = u_1 * sum_k u_k and its Euclidean gradient.
inline double ascent_objective(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x;
  return u[0] * s;
}

inline std::vector<double> ascent_gradient(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x;
  std::vector<double> g(u.size(), u[0]);
  g[0] = s + u[0];
  return g;
}

/// Euclidean gradient of g projected onto the tangent space of the sphere at u.
inline std::vector<double> tangent_gradient(std::span<const double> u) {
  std::vector<double> g = ascent_gradient(u);
  const double radial = dot(g, u);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= radial * u[k];
  return g;
}

struct AscentSettings {
  double step_scale = 0.1;  // step = step_scale / sqrt(n)
  double grad_tol = 1e-11;
  std::size_t max_iters = 100000;
};

/// Projected gradient ascent for g on the sphere from a deterministic start
/// (1,0,...,0) plus `restarts` random starts folded into the nonnegative
/// orthant. Throws NonConvergence only when no start meets the gradient rule.
inline NumericalMax numerical_max(std::size_t n, std::size_t restarts, std::uint64_t seed,
                                  const AscentSettings& cfg = {}) {
  require_dimension(n);
  const double step = cfg.step_scale / std::sqrt(static_cast<double>(n));

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 0.0);
  starts.back()[0] = 1.0;
  for (std::size_t r = 0; r < restarts; ++r) {
    const UnitVector s = sample_sphere(n, seed, r);
    std::vector<double> c(s.coords().begin(), s.coords().end());
    for (double& x : c) x = std::abs(x);
    starts.push_back(std::move(c));
  }

  bool have_best = false;
  NumericalMax best{0.0, UnitVector::normalize({1.0}), starts.size(), 0};
  std::vector<double> best_coords;

  for (auto& u : starts) {
    bool converged = false;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
      const std::vector<double> t = tangent_gradient(u);
      if (l2_norm(t) < cfg.grad_tol) {
        converged = true;
        break;
      }
      for (std::size_t k = 0; k < n; ++k) u[k] += step * t[k];
      const double len = l2_norm(u);
      for (double& x : u) x /= len;
    }
    best.converged_starts += converged;
    const double value = ascent_objective(u);
    if (!have_best || value > best.value || (value == best.value && u > best_coords)) {
      have_best = true;
      best.value = value;
      best_coords = u;
    }
  }
  best.argmax = UnitVector::normalize(best_coords);
  if (best.converged_starts == 0) throw NonConvergence("numerical_max: no start converged", best);
  return best;
}

}  // namespace cubeshadow
