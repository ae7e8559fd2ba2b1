#pragma once

// Skewed a-stable Green function G = xG_delta^a(t,x) via Fourier
// inversion, plus the constants Lambda, C-tilde and the comparison
// kernels g_a / g_1.
//
// The cosine form used throughout: for t > 0,
//   G(t,x) = (1/pi) int_0^inf exp(-t c xi^a) cos(xi x + t s xi^a) dxi,
// with c = cos(pi delta/2), s = sin(pi delta/2), and the scaling
// G(t,x) = t^{-1/a} G(1, x t^{-1/a}).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/grid.hpp"
#include "fsheat/model.hpp"
#include "fsheat/quadrature.hpp"

namespace fsheat {

inline constexpr double kPi = 3.14159265358979323846;

inline std::atomic<long>& green_clamp_count() {
  static std::atomic<long> n{0};
  return n;
}

/// N-term large-|x| expansion of G(1,x), Lemma-style:
///   (1/pi) sum_{j=1}^N |x|^{-aj-1} ((-1)^{j+1}/j!) Gamma(aj+1) sin(j (a -+ delta) pi/2)
/// with the sign branch tied to sgn(x).
inline double tail_asymptote(const ModelParams& params, double x, int N) {
  params.validate_density();
  double branch = x >= 0.0 ? params.a - params.delta : params.a + params.delta;
  double ax = std::fabs(x);
  double acc = 0.0;
  double factorial = 1.0;
  for (int j = 1; j <= N; ++j) {
    factorial *= j;
    double sgn = (j % 2 == 1) ? 1.0 : -1.0;
    acc += std::pow(ax, -params.a * j - 1.0) * (sgn / factorial) *
           std::tgamma(params.a * j + 1.0) * std::sin(j * branch * kPi / 2.0);
  }
  return acc / kPi;
}

/// Leading tail coefficient of G(1,x) |x|^{a+1} on one side.
inline double tail_leading_coeff(const ModelParams& params, int side_sign) {
  double branch = side_sign >= 0 ? params.a - params.delta : params.a + params.delta;
  return std::tgamma(params.a + 1.0) * std::sin(branch * kPi / 2.0) / kPi;
}

namespace detail {

/// One-off quadrature of the cosine form at (t,x).  Panel width tracks
/// the oscillation scale 1/|x|; the xi^a kink at 0 gets geometric panels.
inline double green_quad(double a, double delta, double t, double x, int order) {
  double c = std::cos(kPi * delta / 2.0);
  double s = std::sin(kPi * delta / 2.0);
  if (!(c > 1e-6)) throw accuracy_error("green_density: integrand does not decay", 1.0);
  double xi_max = std::pow(41.45 / (t * c), 1.0 / a);
  double w = kPi / (2.0 * std::fabs(x) + 1.0);
  if (w > xi_max / 4.0) w = xi_max / 4.0;
  auto f = [&](double xi) {
    return std::exp(-t * c * std::pow(xi, a)) * std::cos(xi * x + t * s * std::pow(xi, a));
  };
  double acc = 0.0;
  // geometric refinement of the first panel [0,w]
  double lo = w;
  for (int j = 0; j < 24; ++j) {
    double hi = lo;
    lo = hi * 0.5;
    acc += gl_integrate(f, lo, hi, order);
  }
  acc += gl_integrate(f, 0.0, lo, order);
  int panels = static_cast<int>(std::ceil((xi_max - w) / w));
  for (int p = 0; p < panels; ++p) {
    double plo = w + (xi_max - w) * p / panels;
    double phi = w + (xi_max - w) * (p + 1) / panels;
    acc += gl_integrate(f, plo, phi, order);
  }
  return acc / kPi;
}

}  // namespace detail

/// Tabulated profile of G(1,.) with cubic interpolation, analytic tail
/// beyond the table, and a cumulative-mass table.
class GreenProfile {
 public:
  GreenProfile(double a, double delta) : a_(a), delta_(delta) {
    build();
  }

  double a() const { return a_; }
  double delta() const { return delta_; }
  double extent() const { return X_; }

  /// G(1,xi).
  double value(double xi) const {
    if (std::fabs(xi) >= X_ - 2.0 * h_) {
      ModelParams p;
      p.a = a_;
      p.delta = delta_;
      return tail_asymptote(p, xi, 3);
    }
    double u = (xi + X_) / h_;
    long i = static_cast<long>(std::floor(u));
    double f = u - i;
    if (i < 1) { i = 1; f = u - 1.0; }
    if (i > static_cast<long>(values_.size()) - 3) { i = values_.size() - 3; f = u - i; }
    // 4-point Lagrange on nodes i-1..i+2
    double vm = values_[i - 1], v0 = values_[i], v1 = values_[i + 1], v2 = values_[i + 2];
    double fm = f + 1.0, f1 = f - 1.0, f2 = f - 2.0;
    return -vm * f * f1 * f2 / 6.0 + v0 * fm * f1 * f2 / 2.0 - v1 * fm * f * f2 / 2.0 +
           v2 * fm * f * f1 / 6.0;
  }

  /// int_xi^inf G(1,u) du.
  double mass_above(double xi) const {
    if (xi >= X_) return tail_mass(xi, +1);
    if (xi <= -X_) return total_mass_ - tail_mass(-xi, -1);
    double u = (xi + X_) / h_;
    long i = static_cast<long>(std::floor(u));
    double f = u - i;
    if (i < 0) { i = 0; f = 0.0; }
    if (i > static_cast<long>(mass_.size()) - 2) { i = mass_.size() - 2; f = 1.0; }
    return mass_[i] + f * (mass_[i + 1] - mass_[i]);
  }

  /// int_{-inf}^{inf} G(1,u)^2 du.
  double integral_sq() const { return integral_sq_; }
  /// int G(1,u) du over the whole line (diagnostic, should be ~1).
  double total_mass() const { return total_mass_; }

  double grid_step() const { return h_; }
  const std::vector<double>& samples() const { return values_; }
  double sample_x(std::size_t i) const { return -X_ + h_ * i; }

 private:
  double tail_mass(double xi, int side) const {
    ModelParams p;
    p.a = a_;
    p.delta = delta_;
    double branch = side >= 0 ? a_ - delta_ : a_ + delta_;
    double acc = 0.0;
    double factorial = 1.0;
    for (int j = 1; j <= 3; ++j) {
      factorial *= j;
      double sgn = (j % 2 == 1) ? 1.0 : -1.0;
      acc += std::pow(xi, -a_ * j) / (a_ * j) * (sgn / factorial) *
             std::tgamma(a_ * j + 1.0) * std::sin(j * branch * kPi / 2.0);
    }
    return acc / kPi;
  }

  void build() {
    double c = std::cos(kPi * delta_ / 2.0);
    double s = std::sin(kPi * delta_ / 2.0);
    if (!(c > 1e-6)) throw accuracy_error("GreenProfile: integrand does not decay", 1.0);
    double xi_max = std::pow(41.45 / c, 1.0 / a_);
    double w = kPi / (2.0 * X_ + 1.0);

    // frequency nodes: geometric panels near 0, uniform panels beyond
    std::vector<double> nodes, wts;
    const GaussLegendre& gl = gauss_legendre(12);
    auto add_panel = [&](double lo, double hi) {
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        nodes.push_back(mid + half * gl.nodes[q]);
        wts.push_back(half * gl.weights[q]);
      }
    };
    double lo = w;
    for (int j = 0; j < 24; ++j) {
      add_panel(lo * 0.5, lo);
      lo *= 0.5;
    }
    add_panel(0.0, lo);
    int panels = static_cast<int>(std::ceil((xi_max - w) / w));
    for (int p = 0; p < panels; ++p)
      add_panel(w + (xi_max - w) * p / panels, w + (xi_max - w) * (p + 1) / panels);

    std::size_t nq = nodes.size();
    std::vector<double> wa(nq), wb(nq);
    for (std::size_t q = 0; q < nq; ++q) {
      double xa = std::pow(nodes[q], a_);
      double damp = std::exp(-c * xa) * wts[q];
      wa[q] = damp * std::cos(s * xa);
      wb[q] = damp * std::sin(s * xa);
    }

    std::size_t nhalf = static_cast<std::size_t>(std::round(X_ / h_));
    std::size_t n = 2 * nhalf + 1;
    values_.assign(n, 0.0);
    for (std::size_t i = 0; i <= nhalf; ++i) {
      double x = h_ * i;
      double acc_pos = 0.0, acc_neg = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        double cq = std::cos(nodes[q] * x);
        double sq = std::sin(nodes[q] * x);
        acc_pos += wa[q] * cq - wb[q] * sq;  // G(1, +x)
        acc_neg += wa[q] * cq + wb[q] * sq;  // G(1, -x)
      }
      values_[nhalf + i] = acc_pos / kPi;
      values_[nhalf - i] = acc_neg / kPi;
    }
    for (double& v : values_) {
      if (v < 0.0) {
        if (v < -1e-8) throw accuracy_error("GreenProfile: negative density", -v);
        green_clamp_count()++;
        v = 0.0;
      }
    }

    // cumulative mass from the right (trapezoid) plus analytic tails
    mass_.assign(n, 0.0);
    mass_[n - 1] = tail_mass(X_, +1);
    for (std::size_t i = n - 1; i > 0; --i)
      mass_[i - 1] = mass_[i] + 0.5 * h_ * (values_[i] + values_[i - 1]);
    total_mass_ = mass_[0] + tail_mass(X_, -1);

    // Simpson for int G^2 plus the leading analytic tail
    double acc = 0.0;
    for (std::size_t i = 0; i + 2 < n; i += 2)
      acc += h_ / 3.0 *
             (values_[i] * values_[i] + 4.0 * values_[i + 1] * values_[i + 1] +
              values_[i + 2] * values_[i + 2]);
    ModelParams p;
    p.a = a_;
    p.delta = delta_;
    double cr = tail_leading_coeff(p, +1), cl = tail_leading_coeff(p, -1);
    acc += (cr * cr + cl * cl) * std::pow(X_, -2.0 * a_ - 1.0) / (2.0 * a_ + 1.0);
    integral_sq_ = acc;
  }

  double a_;
  double delta_;
  double X_ = 32.0;
  double h_ = 0.008;
  std::vector<double> values_;
  std::vector<double> mass_;
  double total_mass_ = 0.0;
  double integral_sq_ = 0.0;
};

/// Shared profile cache keyed by (a,delta).
inline std::shared_ptr<const GreenProfile> green_profile(const ModelParams& params) {
  params.validate_density();
  static std::mutex mu;
  static std::map<std::pair<long long, long long>, std::shared_ptr<const GreenProfile>> cache;
  auto key = std::make_pair(static_cast<long long>(std::llround(params.a * 1e12)),
                            static_cast<long long>(std::llround(params.delta * 1e12)));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto prof = std::make_shared<const GreenProfile>(params.a, params.delta);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  cache[key] = prof;
  return prof;
}

/// Pointwise Green function by direct quadrature (reduced to t=1 via the
/// scaling law outside a moderate time window to bound the cost).
inline double green_density(const ModelParams& params, double t, double x) {
  params.validate_density();
  if (!(t > 0.0)) throw domain_error("green_density requires t > 0");
  double v;
  if (t >= 0.25 && t <= 4.0) {
    v = detail::green_quad(params.a, params.delta, t, x, 16);
  } else {
    double scale = std::pow(t, -1.0 / params.a);
    v = scale * detail::green_quad(params.a, params.delta, 1.0, x * scale, 16);
  }
  if (v < 0.0) {
    if (v < -1e-8) throw accuracy_error("green_density: negative value beyond clamp", -v);
    green_clamp_count()++;
    v = 0.0;
  }
  return v;
}

/// Lambda = sup_x G(1,x), golden-section refinement of a profile scan.
inline double lambda_const(const ModelParams& params) {
  auto prof = green_profile(params);
  const auto& vals = prof->samples();
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  double lo = prof->sample_x(best > 0 ? best - 1 : best);
  double hi = prof->sample_x(best + 1 < vals.size() ? best + 1 : best);
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = prof->value(x1), f2 = prof->value(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = prof->value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = prof->value(x1);
    }
  }
  return std::max(f1, f2);
}

/// g_a kernel (1/pi) t / (t^{2/a} + x^2)^{(a+1)/2}.
inline double g_a_kernel(double a, double t, double x) {
  if (!(a > 0.0)) throw domain_error("g_a_kernel requires a > 0");
  if (!(t > 0.0)) throw domain_error("g_a_kernel requires t > 0");
  return t / (kPi * std::pow(std::pow(t, 2.0 / a) + x * x, (a + 1.0) / 2.0));
}

/// C-tilde_{a,delta} = inf_y G(1,y) / (pi g_a(1,y)), strict regime only.
inline double c_tilde(const ModelParams& params) {
  if (!(params.a > 1.0 && params.a < 2.0) || !(std::fabs(params.delta) < 2.0 - params.a))
    throw domain_error("c_tilde requires a in ]1,2[ and |delta| < 2-a");
  auto prof = green_profile(params);
  double inf = std::numeric_limits<double>::infinity();
  const auto& vals = prof->samples();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double y = prof->sample_x(i);
    double r = vals[i] / (kPi * g_a_kernel(params.a, 1.0, y));
    if (r < inf) inf = r;
  }
  // log-spaced |y| out to 1e3 through the asymptote
  for (int side = -1; side <= 1; side += 2) {
    for (double ay = prof->extent(); ay <= 1e3; ay *= 1.05) {
      double y = side * ay;
      double r = tail_asymptote(params, y, 3) / (kPi * g_a_kernel(params.a, 1.0, y));
      if (r < inf) inf = r;
    }
    // limiting ratio of the leading tail terms
    double lim = tail_leading_coeff(params, side);
    if (lim < inf) inf = lim;
  }
  if (!(inf > 0.0)) throw domain_error("c_tilde: infimum not strictly positive");
  return inf;
}

/// Tabulates G on the grid via the scaled profile.
inline ScalarField green_field(const ModelParams& params, const GridSpec& grid) {
  grid.validate();
  auto prof = green_profile(params);
  ScalarField out(grid);
  for (int i = 0; i < grid.nt; ++i) {
    double t = grid.t(i);
    double scale = std::pow(t, -1.0 / params.a);
    for (int j = 0; j < grid.nx; ++j) {
      double v = scale * prof->value(grid.x(j) * scale);
      out.at(i, j) = v > 0.0 ? v : 0.0;
    }
  }
  return out;
}

/// K_{a,0}: sup of G(1,x)(1+|x|^{1+a}) over a near/far grid.
inline double k_a0_const(const ModelParams& params) {
  auto prof = green_profile(params);
  double sup = 0.0;
  const auto& vals = prof->samples();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double x = prof->sample_x(i);
    double v = vals[i] * (1.0 + std::pow(std::fabs(x), 1.0 + params.a));
    if (v > sup) sup = v;
  }
  for (int side = -1; side <= 1; side += 2) {
    for (double ax = prof->extent(); ax <= 1e3; ax *= 1.05) {
      double v = tail_asymptote(params, side * ax, 3) * (1.0 + std::pow(ax, 1.0 + params.a));
      if (v > sup) sup = v;
    }
  }
  return sup;
}

}  // namespace fsheat
