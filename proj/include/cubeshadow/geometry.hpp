#pragma once

// Projections of cube vertices onto central hyperplane sections.
//
// The cube is C_n = [-1,1]^n, u is a unit vector and H_u = {x : <x,u> = 0}.
// pi_u(x) = x - <x,u> u projects onto H_u. A vertex eps in {-1,+1}^n is
// "inside" when ||pi_u(eps)||_inf <= 1, i.e. its shadow lies in C_n ∩ H_u.
// For u not orthogonal to any vertex, an inside vertex exists exactly when
// ||u||_1 ||u||_inf <= 2.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubeshadow/errors.hpp"

namespace cubeshadow {

struct Tolerances {
  // |u_k| <= zero_tol counts as a zero coordinate.
  double zero_tol = 1e-13;
  // satisfied <=> product <= 2 + criterion_tol. A negative value acts as a margin.
  double criterion_tol = 0.0;
  // inside <=> inf_norm <= 1 + inside_tol.
  double inside_tol = 1e-12;

  static double norm_tol(std::size_t n) { return 1e-12 * std::sqrt(static_cast<double>(n)); }
};

/// A point on the unit sphere S^{n-1}. Always normalized on construction.
class UnitVector {
 public:
  /// Rescales `raw` to unit length. Throws ZeroVector for the zero vector and
  /// InvalidInput for empty or non-finite input.
  static UnitVector normalize(std::vector<double> raw) {
    if (raw.empty()) throw InvalidInput("unit vector needs at least one coordinate");
    double scale = 0.0;
    for (double x : raw) {
      if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate");
      scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) throw ZeroVector("cannot normalize the zero vector");
    // Scale first so the sum of squares neither overflows nor underflows.
    double ss = 0.0;
    for (double x : raw) ss += (x / scale) * (x / scale);
    const double norm = scale * std::sqrt(ss);
    for (double& x : raw) x /= norm;
    return UnitVector(std::move(raw));
  }

  /// Keeps `coords` unchanged; they must already have unit length within norm_tol.
  static UnitVector from_unit_coords(std::vector<double> coords);

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t k) const { return coords_[k]; }

  bool operator==(const UnitVector&) const = default;

 private:
  explicit UnitVector(std::vector<double> c) : coords_(std::move(c)) {}
  std::vector<double> coords_;
};

/// Euclidean norm of an arbitrary vector, overflow-safe.
inline double l2_norm(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v / scale) * (v / scale);
  return scale * std::sqrt(ss);
}

inline UnitVector UnitVector::from_unit_coords(std::vector<double> coords) {
  if (coords.empty()) throw InvalidInput("unit vector needs at least one coordinate");
  for (double x : coords)
    if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate");
  if (std::abs(l2_norm(coords) - 1.0) > Tolerances::norm_tol(coords.size())) {
    throw InvalidInput("coordinates are not of unit length");
  }
  return UnitVector(std::move(coords));
}

/// A cube vertex: a sign vector in {-1,+1}^n.
///
/// Vertices order lexicographically with +1 before -1. The packed form used
/// by enumeration maps coordinate k to bit (n-1-k), a set bit meaning -1, so
/// that lexicographic order coincides with integer order of the bits.
class Vertex {
 public:
  static Vertex from_signs(std::span<const int> signs) {
    if (signs.empty()) throw InvalidInput("vertex needs at least one coordinate");
    std::vector<std::int8_t> s;
    s.reserve(signs.size());
    for (int v : signs) {
      if (v != 1 && v != -1) throw InvalidInput("vertex coordinates must be +1 or -1");
      s.push_back(static_cast<std::int8_t>(v));
    }
    return Vertex(std::move(s));
  }

  static Vertex all_ones(std::size_t n) { return Vertex(std::vector<std::int8_t>(n, 1)); }

  static Vertex from_bits(std::size_t n, std::uint64_t bits) {
    if (n == 0 || n > 64) throw InvalidDimension("packed vertex needs 1 <= n <= 64");
    std::vector<std::int8_t> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = ((bits >> (n - 1 - k)) & 1u) ? -1 : 1;
    return Vertex(std::move(s));
  }

  std::size_t dim() const { return signs_.size(); }
  int operator[](std::size_t k) const { return signs_[k]; }
  std::span<const std::int8_t> signs() const { return signs_; }

  Vertex operator-() const {
    auto s = signs_;
    for (auto& v : s) v = static_cast<std::int8_t>(-v);
    return Vertex(std::move(s));
  }

  bool operator==(const Vertex&) const = default;
  std::strong_ordering operator<=>(const Vertex& other) const {
    // +1 sorts before -1, hence the reversed comparison of the raw values.
    const std::size_t m = std::min(dim(), other.dim());
    for (std::size_t k = 0; k < m; ++k) {
      if (signs_[k] != other.signs_[k]) return other.signs_[k] <=> signs_[k];
    }
    return dim() <=> other.dim();
  }

  std::string to_string() const {
    std::string out;
    for (auto v : signs_) out += v > 0 ? '+' : '-';
    return out;
  }

 private:
  explicit Vertex(std::vector<std::int8_t> s) : signs_(std::move(s)) {}
  std::vector<std::int8_t> signs_;
};

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

struct ShadowReport {
  Vertex vertex;
  std::vector<double> shadow;
  double inf_norm = 0.0;
  bool inside = false;
  double inner_product = 0.0;
};

struct CriterionResult {
  double product = 0.0;
  bool satisfied = false;
  Vertex witness;
  bool degenerate_zero_coords = false;
  std::optional<bool> near_vertex_orthogonal;
};

/// l1, l2 and l_inf norms. Sums run over |u_k| in ascending order, so the
/// result is bit-identical under permutations and sign flips of u.
inline Norms norms(const UnitVector& u) {
  std::vector<double> a(u.coords().begin(), u.coords().end());
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end());
  Norms out;
  double ss = 0.0;
  for (double x : a) {
    out.l1 += x;
    ss += x * x;
  }
  out.l2 = std::sqrt(ss);
  out.linf = a.back();
  return out;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

/// pi_u(x) = x - <x,u> u.
inline std::vector<double> project(const UnitVector& u, std::span<const double> x) {
  if (x.size() != u.dim()) throw DimensionMismatch("project: point and direction differ in dimension");
  const double s = dot(x, u.coords());
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= s * u[k];
  return out;
}

/// <eps,u> summed in coordinate order. The enumeration code relies on this
/// exact summation order to reproduce results bit for bit.
inline double vertex_inner_product(const UnitVector& u, const Vertex& eps) {
  if (eps.dim() != u.dim()) throw DimensionMismatch("vertex and direction differ in dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < u.dim(); ++k) s += eps[k] > 0 ? u[k] : -u[k];
  return s;
}

/// Vertex matching the signs of u; coordinates with |u_k| <= zero_tol get +1.
inline Vertex canonical_vertex(const UnitVector& u, const Tolerances& tol = {}) {
  std::vector<int> s(u.dim());
  for (std::size_t k = 0; k < u.dim(); ++k) s[k] = u[k] < -tol.zero_tol ? -1 : 1;
  return Vertex::from_signs(s);
}

inline ShadowReport shadow(const UnitVector& u, const Vertex& eps, const Tolerances& tol = {}) {
  ShadowReport r{eps, {}, 0.0, false, vertex_inner_product(u, eps)};
  r.shadow.resize(u.dim());
  for (std::size_t k = 0; k < u.dim(); ++k) {
    r.shadow[k] = eps[k] - r.inner_product * u[k];
    r.inf_norm = std::max(r.inf_norm, std::abs(r.shadow[k]));
  }
  r.inside = r.inf_norm <= 1.0 + tol.inside_tol;
  return r;
}

/// ||pi_u(eps)||_inf for the canonical vertex, from the norms of u alone.
///
/// With a zero coordinate the shadow has a coordinate equal to +-1, giving
/// max{1, |1 - ||u||_inf ||u||_1|}. Otherwise every coordinate has the form
/// 1 - |u_k| ||u||_1 and the extremes come from the largest and smallest |u_k|.
inline double shadow_norm_closed_form(const UnitVector& u, const Tolerances& tol = {}) {
  const Norms nm = norms(u);
  double umin = nm.linf;
  bool has_zero = false;
  for (double x : u.coords()) {
    const double a = std::abs(x);
    if (a <= tol.zero_tol) has_zero = true;
    umin = std::min(umin, a);
  }
  const double top = std::abs(1.0 - nm.linf * nm.l1);
  if (has_zero) return std::max(1.0, top);
  return std::max(top, std::abs(1.0 - umin * nm.l1));
}

inline bool has_zero_coordinate(const UnitVector& u, const Tolerances& tol = {}) {
  return std::any_of(u.coords().begin(), u.coords().end(),
                     [&](double x) { return std::abs(x) <= tol.zero_tol; });
}

/// Decides ||u||_1 ||u||_inf <= 2 and supplies the canonical witness vertex.
/// near_vertex_orthogonal stays empty; the oracle module can fill it.
inline CriterionResult criterion(const UnitVector& u, const Tolerances& tol = {}) {
  const Norms nm = norms(u);
  const double product = nm.l1 * nm.linf;
  return CriterionResult{product, product <= 2.0 + tol.criterion_tol, canonical_vertex(u, tol),
                         has_zero_coordinate(u, tol), std::nullopt};
}

}  // namespace cubeshadow
