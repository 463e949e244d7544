#pragma once

// Exhaustive ground truth over all 2^n cube vertices.
//
// eps and -eps have the same shadow norm and opposite inner products, so only
// the 2^{n-1} vertices with eps_1 = +1 are visited. Within that half the walk
// follows a Gray code: consecutive vertices differ in one sign, and <eps,u>
// is updated by +-2 u_k with compensated summation, reseeded from scratch
// every 2^16 steps. The running values only screen candidates. Any vertex
// that comes within kScreenSlack of the current best is re-evaluated with the
// plain coordinate-order sum, so the verdict equals a naive enumeration
// exactly and does not depend on how the walk is split into blocks.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "cubeshadow/errors.hpp"
#include "cubeshadow/geometry.hpp"
#include "cubeshadow/sphere_sampler.hpp"

namespace cubeshadow {

struct OracleOptions {
  std::size_t n_limit = 28;
  // orthogonal_vertex_found <=> min |<eps,u>| <= orthogonal_tol.
  double orthogonal_tol = 1e-9;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  // Smallest share of the 2^{n-1} vertex pairs worth handing to a thread.
  std::uint64_t min_block_pairs = std::uint64_t{1} << 14;
  Tolerances tol{};
};

struct OracleVerdict {
  bool exists_inside = false;
  Vertex best_vertex = Vertex::all_ones(1);
  double best_inf_norm = 0.0;
  std::uint64_t vertices_checked = 0;
  bool orthogonal_vertex_found = false;
  double min_abs_inner_product = 0.0;
};

namespace detail {

inline constexpr double kScreenSlack = 1e-9;
inline constexpr std::uint64_t kReseedInterval = std::uint64_t{1} << 16;

// Packed vertex: bit (n-1-k) set means eps_k = -1.
inline double packed_inner_product(std::span<const double> u, std::uint64_t bits) {
  const std::size_t n = u.size();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += ((bits >> (n - 1 - k)) & 1u) ? -u[k] : u[k];
  return s;
}

inline double packed_inf_norm(std::span<const double> u, std::uint64_t bits, double s) {
  const std::size_t n = u.size();
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ((bits >> (n - 1 - k)) & 1u) ? -1.0 : 1.0;
    m = std::max(m, std::abs(e - s * u[k]));
  }
  return m;
}

struct ScanSummary {
  double best_norm = std::numeric_limits<double>::infinity();
  std::uint64_t best_bits = 0;
  double min_abs_s = std::numeric_limits<double>::infinity();

  void offer_norm(double norm, std::uint64_t bits) {
    if (norm < best_norm || (norm == best_norm && bits < best_bits)) {
      best_norm = norm;
      best_bits = bits;
    }
  }

  void merge(const ScanSummary& o) {
    offer_norm(o.best_norm, o.best_bits);
    min_abs_s = std::min(min_abs_s, o.min_abs_s);
  }
};

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Walks pair indices [lo, hi) of the Gray sequence over the low n-1 bits.
template <bool TrackNorm>
ScanSummary scan_block(std::span<const double> u, std::uint64_t lo, std::uint64_t hi) {
  const std::size_t n = u.size();
  ScanSummary out;
  if (lo >= hi) return out;

  std::uint64_t bits = lo ^ (lo >> 1);
  std::vector<double> eps(n);
  for (std::size_t k = 0; k < n; ++k) eps[k] = ((bits >> (n - 1 - k)) & 1u) ? -1.0 : 1.0;

  auto exact_visit = [&](std::uint64_t b) {
    const double s = packed_inner_product(u, b);
    out.min_abs_s = std::min(out.min_abs_s, std::abs(s));
    if constexpr (TrackNorm) out.offer_norm(packed_inf_norm(u, b, s), b);
    return s;
  };

  CompensatedSum s;
  s.sum = exact_visit(bits);

  for (std::uint64_t i = lo + 1; i < hi; ++i) {
    const int b = std::countr_zero(i);
    const std::size_t k = n - 1 - static_cast<std::size_t>(b);
    bits ^= std::uint64_t{1} << b;
    eps[k] = -eps[k];
    if ((i - lo) % kReseedInterval == 0) {
      s = CompensatedSum{packed_inner_product(u, bits), 0.0};
    } else {
      s.add(2.0 * eps[k] * u[k]);
    }
    const double sv = s.value();

    bool candidate = std::abs(sv) <= out.min_abs_s + kScreenSlack;
    if constexpr (TrackNorm) {
      if (!candidate) {
        const double bound = out.best_norm + kScreenSlack;
        candidate = true;
        for (std::size_t j = 0; j < n; ++j) {
          if (std::abs(eps[j] - sv * u[j]) > bound) {
            candidate = false;
            break;
          }
        }
      }
    }
    if (candidate) exact_visit(bits);
  }
  return out;
}

template <bool TrackNorm>
ScanSummary scan_all(const UnitVector& u, const OracleOptions& opts) {
  const std::size_t n = u.dim();
  if (n > opts.n_limit || n > 63) {
    throw DimensionTooLarge("exhaustive enumeration refused: n = " + std::to_string(n) +
                            " exceeds limit " + std::to_string(std::min<std::size_t>(opts.n_limit, 63)));
  }
  const std::uint64_t pairs = std::uint64_t{1} << (n - 1);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t max_blocks = std::max<std::uint64_t>(1, pairs / std::max<std::uint64_t>(1, opts.min_block_pairs));
  const std::uint64_t blocks = std::min<std::uint64_t>(threads, max_blocks);

  if (blocks <= 1) return scan_block<TrackNorm>(u.coords(), 0, pairs);

  std::vector<ScanSummary> parts(blocks);
  std::vector<std::thread> workers;
  workers.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t lo = pairs * b / blocks;
    const std::uint64_t hi = pairs * (b + 1) / blocks;
    workers.emplace_back([&, b, lo, hi] { parts[b] = scan_block<TrackNorm>(u.coords(), lo, hi); });
  }
  for (auto& w : workers) w.join();
  ScanSummary out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

inline OracleVerdict to_verdict(const ScanSummary& s, std::size_t n, const OracleOptions& opts) {
  OracleVerdict v;
  v.best_vertex = Vertex::from_bits(n, s.best_bits);
  v.best_inf_norm = s.best_norm;
  v.exists_inside = s.best_norm <= 1.0 + opts.tol.inside_tol;
  v.vertices_checked = std::uint64_t{1} << n;
  v.min_abs_inner_product = s.min_abs_s;
  v.orthogonal_vertex_found = s.min_abs_s <= opts.orthogonal_tol;
  return v;
}

}  // namespace detail

/// Visits every vertex and reports the best shadow and the closest approach
/// of u to orthogonality with a vertex. Throws DimensionTooLarge above n_limit.
inline OracleVerdict enumerate_shadows(const UnitVector& u, const OracleOptions& opts = {}) {
  return detail::to_verdict(detail::scan_all<true>(u, opts), u.dim(), opts);
}

/// Reference implementation: all 2^n vertices in plain binary order, each
/// evaluated from scratch. Kept for cross-checking and benchmarking.
inline OracleVerdict enumerate_shadows_naive(const UnitVector& u, const OracleOptions& opts = {}) {
  const std::size_t n = u.dim();
  if (n > opts.n_limit || n > 63) throw DimensionTooLarge("naive enumeration refused");
  detail::ScanSummary s;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const double ip = detail::packed_inner_product(u.coords(), bits);
    s.min_abs_s = std::min(s.min_abs_s, std::abs(ip));
    s.offer_norm(detail::packed_inf_norm(u.coords(), bits, ip), bits);
  }
  return detail::to_verdict(s, n, opts);
}

/// Boolean form with early exit; does not produce best-vertex statistics.
inline bool any_vertex_inside(const UnitVector& u, const OracleOptions& opts = {}) {
  const std::size_t n = u.dim();
  if (n > opts.n_limit || n > 63) throw DimensionTooLarge("exhaustive enumeration refused");
  const double limit = 1.0 + opts.tol.inside_tol;
  const std::uint64_t pairs = std::uint64_t{1} << (n - 1);
  const auto coords = u.coords();
  std::uint64_t bits = 0;
  double s = detail::packed_inner_product(coords, 0);
  for (std::uint64_t i = 0; i < pairs; ++i) {
    if (i > 0) {
      const int b = std::countr_zero(i);
      bits ^= std::uint64_t{1} << b;
      s = (i % detail::kReseedInterval == 0)
              ? detail::packed_inner_product(coords, bits)
              : s + (((bits >> b) & 1u) ? -2.0 : 2.0) * coords[n - 1 - static_cast<std::size_t>(b)];
    }
    if (detail::packed_inf_norm(coords, bits, s) <= limit + detail::kScreenSlack) {
      const double exact = detail::packed_inner_product(coords, bits);
      if (detail::packed_inf_norm(coords, bits, exact) <= limit) return true;
    }
  }
  return false;
}

/// min over vertices of |<eps,u>|.
inline double min_abs_vertex_inner_product(const UnitVector& u, const OracleOptions& opts = {}) {
  return detail::scan_all<false>(u, opts).min_abs_s;
}

/// True iff some vertex eps has |<eps,u>| <= tol.
inline bool is_orthogonal_to_some_vertex(const UnitVector& u, double tol, const OracleOptions& opts = {}) {
  return min_abs_vertex_inner_product(u, opts) <= tol;
}

/// Runs the orthogonality detector and records its outcome in the result.
inline CriterionResult with_orthogonality_check(CriterionResult r, const UnitVector& u, double tol,
                                                const OracleOptions& opts = {}) {
  r.near_vertex_orthogonal = is_orthogonal_to_some_vertex(u, tol, opts);
  return r;
}

struct AgreementStats {
  std::uint64_t trials = 0;
  std::uint64_t agreements = 0;
  std::uint64_t skips = 0;
  std::uint64_t disagreements = 0;
  // Among non-skipped samples, how many satisfied the criterion.
  std::uint64_t satisfied = 0;
};

inline constexpr double kAgreementSkipTol = 1e-9;

/// Compares the norm criterion against exhaustive search on `trials` uniform
/// directions. Samples within skip_tol of a vertex-orthogonal direction are
/// skipped, since the criterion makes no claim there.
inline AgreementStats agreement_sweep(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                      const OracleOptions& opts = {}, double skip_tol = kAgreementSkipTol) {
  if (n < 1 || n > opts.n_limit) throw DimensionTooLarge("agreement_sweep: n outside [1, n_limit]");
  AgreementStats st;
  st.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const UnitVector u = sample_sphere(n, seed, i);
    const OracleVerdict v = enumerate_shadows(u, opts);
    if (v.min_abs_inner_product < skip_tol) {
      ++st.skips;
      continue;
    }
    const bool satisfied = criterion(u, opts.tol).satisfied;
    st.satisfied += satisfied;
    if (satisfied == v.exists_inside) {
      ++st.agreements;
    } else {
      ++st.disagreements;
    }
  }
  return st;
}

}  // namespace cubeshadow
