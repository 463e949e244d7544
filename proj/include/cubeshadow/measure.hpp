#pragma once

// Monte Carlo statistics of f(u) = ||u||_1 ||u||_inf for uniform u on S^{n-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "cubeshadow/errors.hpp"
#include "cubeshadow/extremal.hpp"
#include "cubeshadow/geometry.hpp"
#include "cubeshadow/sphere_sampler.hpp"

namespace cubeshadow {

struct MeasureEstimate {
  std::size_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double frac_satisfying = 0.0;
  double mean_product = 0.0;
  double median_product = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  // median / sqrt(ln n); NaN for n < 3.
  double growth_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct MeasureOptions {
  // Counts f <= 2 - margin as satisfying. Zero keeps the bound inclusive.
  double margin = 0.0;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Nearest-rank quantile of an ascending-sorted sample: element ceil(p*N)-1.
inline double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidInput("quantile of empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

/// f for samples 0..count-1 of stream `seed`, in index order. Work is split
/// into contiguous chunks; each value depends only on its index.
inline std::vector<double> sample_products(std::size_t n, std::uint64_t count, std::uint64_t seed,
                                           unsigned threads = 0) {
  std::vector<double> f(count);
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) f[i] = criterion_product(sample_sphere(n, seed, i));
  };
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(1, count / 64)));
  if (t <= 1) {
    run(0, count);
    return f;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(t);
  for (unsigned w = 0; w < t; ++w) {
    workers.emplace_back([&, w] {
      try {
        run(count * w / t, count * (w + 1) / t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : workers) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return f;
}

inline MeasureEstimate summarize(std::size_t n, std::uint64_t seed, std::vector<double> f, double margin = 0.0) {
  if (f.empty()) throw InvalidInput("estimate needs at least one sample");
  MeasureEstimate e;
  e.n = n;
  e.samples = f.size();
  e.seed = seed;
  std::uint64_t hits = 0;
  double sum = 0.0;
  for (double x : f) {
    hits += x <= 2.0 - margin;
    sum += x;
  }
  e.frac_satisfying = static_cast<double>(hits) / static_cast<double>(f.size());
  e.mean_product = sum / static_cast<double>(f.size());
  std::sort(f.begin(), f.end());
  e.median_product = nearest_rank(f, 0.5);
  e.q05 = nearest_rank(f, 0.05);
  e.q95 = nearest_rank(f, 0.95);
  if (n >= 3) e.growth_ratio = e.median_product / std::sqrt(std::log(static_cast<double>(n)));
  return e;
}

inline MeasureEstimate estimate(std::size_t n, std::uint64_t samples, std::uint64_t seed,
                                const MeasureOptions& opts = {}) {
  require_dimension(n);
  if (samples < 1) throw InvalidInput("estimate needs at least one sample");
  return summarize(n, seed, sample_products(n, samples, seed, opts.threads), opts.margin);
}

inline std::vector<MeasureEstimate> growth_scan(std::span<const std::size_t> dims, std::uint64_t samples,
                                                std::uint64_t seed, const MeasureOptions& opts = {}) {
  if (dims.empty()) throw InvalidInput("growth_scan needs at least one dimension");
  std::vector<MeasureEstimate> out;
  out.reserve(dims.size());
  for (std::size_t n : dims) {
    if (n < 3) throw InvalidDimension("growth_scan dimensions must be >= 3");
    out.push_back(estimate(n, samples, seed, opts));
  }
  return out;
}

/// Least-squares slope of median f against sqrt(ln n). NaN with fewer than
/// two usable rows.
inline double growth_slope(std::span<const MeasureEstimate> rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (const auto& r : rows) {
    if (r.n < 2) continue;
    const double x = std::sqrt(std::log(static_cast<double>(r.n)));
    sx += x;
    sy += r.median_product;
    sxx += x * x;
    sxy += x * r.median_product;
    m += 1;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

/// Fraction of samples whose canonical vertex is within `tol` of orthogonal.
inline double canonical_orthogonal_fraction(std::size_t n, std::uint64_t samples, std::uint64_t seed,
                                            double tol = 1e-9) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const UnitVector u = sample_sphere(n, seed, i);
    hits += std::abs(vertex_inner_product(u, canonical_vertex(u))) < tol;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace cubeshadow
