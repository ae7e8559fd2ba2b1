#pragma once

// Quadrature helpers: Gauss-Legendre panels, adaptive Simpson, and a
// product rule for uniform-grid integrands with integrable power-law
// endpoint singularities.

#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fsheat/errors.hpp"

namespace fsheat {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of order n (Newton iteration on Legendre roots).
inline const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::unordered_map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    gl.nodes[n - 1 - i] = x;
    gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

/// Integral of f over [lo,hi] with a single n-point Gauss-Legendre rule.
inline double gl_integrate(const std::function<double(double)>& f, double lo, double hi, int n) {
  const GaussLegendre& gl = gauss_legendre(n);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return acc * half;
}

/// Composite Gauss-Legendre over equal panels.
inline double gl_panels(const std::function<double(double)>& f, double lo, double hi,
                        int panels, int order = 8) {
  double acc = 0.0;
  double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) acc += gl_integrate(f, lo + p * w, lo + (p + 1) * w, order);
  return acc;
}

namespace detail {
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double lo, double hi,
                                   double flo, double fmid, double fhi, double whole, double tol,
                                   int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-10, int max_depth = 30) {
  double mid = 0.5 * (lo + hi);
  double flo = f(lo), fmid = f(mid), fhi = f(hi);
  double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return detail::adaptive_simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

namespace detail {
/// Integral from 0 to `upto` of the power law fitted through
/// (h, v1) and (2h, v2); falls back to exponent `p_fallback` (or to a
/// trapezoid estimate) when the values do not admit a fit.
inline double power_panel(double v1, double v2, bool have_v2, double h, double upto,
                          double p_fallback) {
  if (!(v1 > 0.0)) {
    // flat/degenerate data: trapezoid using what is available
    double slope_val = have_v2 ? 0.5 * (v1 + v2) : v1;
    return upto * slope_val;
  }
  double p = p_fallback;
  if (have_v2 && v2 > 0.0) {
    p = std::log(v2 / v1) / std::log(2.0);
    if (p < -0.95) p = -0.95;
    if (p > 6.0) p = 6.0;
  }
  double c = v1 / std::pow(h, p);
  return c * std::pow(upto, p + 1.0) / (p + 1.0);
}
}  // namespace detail

/// Integral over [0, k*h] of a function sampled at s = h, 2h, ..., (k-1)h
/// with integrable power-law singularities allowed at both endpoints.
/// Endpoint panels use a local power-law fit (product integration), the
/// interior uses the trapezoid rule.  `p_fallback` is the exponent assumed
/// when no two-point fit is possible (e.g. -1/a for L_0 factors).
inline double singular_endpoint_integral(const std::vector<double>& g, double h,
                                         double p_lo, double p_hi) {
  int k = static_cast<int>(g.size()) + 1;  // g[j-1] = value at j*h, j=1..k-1
  if (k <= 1) return 0.0;
  if (k == 2) {
    // single sample at the midpoint of [0,2h]; symmetric model
    // g(s) = A (s^p + (2h-s)^p) / (2 h^p) with g(h) = A
    double v = g[0];
    if (!(v > 0.0)) return 2.0 * h * v;
    double p = 0.5 * (p_lo + p_hi);
    return v * h * std::pow(2.0, p + 1.0) / (p + 1.0);
  }
  if (k == 3) {
    // split at the midpoint 1.5h; fit each half from the two samples
    double lo = detail::power_panel(g[0], g[1], true, h, 1.5 * h, p_lo);
    double hi = detail::power_panel(g[1], g[0], true, h, 1.5 * h, p_hi);
    return lo + hi;
  }
  double acc = detail::power_panel(g[0], g[1], true, h, 2.0 * h, p_lo) +
               detail::power_panel(g[k - 2], g[k - 3], true, h, 2.0 * h, p_hi);
  // interior trapezoid over [2h, (k-2)h]: samples j=2..k-2
  acc += 0.5 * h * (g[1] + g[k - 3]);
  for (int j = 3; j <= k - 3; ++j) acc += h * g[j - 1];
  return acc;
}

}  // namespace fsheat
