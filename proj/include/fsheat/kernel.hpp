#pragma once

// The renewal kernel series K(t,x;lambda) = sum_n L_n, with
// L_0 = lambda^2 G^2 and L_n = L_{n-1} (*) L_0 (space-time convolution),
// its time integral H, and the explicit upper/lower bounds.
//
// Since G is exactly self-similar, so is every term:
//   L_n(t,x) = t^{(n+1)/a* - 1 - 1/a} phi_n(x t^{-1/a}),  phi_n = L_n(1,.)
// at lambda = 1.  The recursion is therefore run once on a fixed z-grid:
//   phi_n(x) = int_0^1 s^{n/a*-1} (1-s)^{1/a*-1} (f_s * g_{1-s})(x) ds
// where f_s, g_u are the mass-preserving dilations of phi_{n-1}, phi_0.
// Each spatial convolution is evaluated in the Fourier domain by sampling
// the factors' continuous transforms at dilated frequencies, which stays
// accurate uniformly in s (the s -> 0 delta limit is exact).  The time
// quadrature substitutes away both Beta-weight endpoint singularities.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/fft.hpp"
#include "fsheat/grid.hpp"
#include "fsheat/model.hpp"
#include "fsheat/quadrature.hpp"
#include "fsheat/specfun.hpp"
#include "fsheat/stable_green.hpp"

namespace fsheat {

struct KernelEstimate {
  ScalarField field;                    // truncated series on the output grid
  int trunc_index = 0;                  // N: series summed over n <= N
  std::vector<double> tail_bound_field; // per output time slice
  double lambda_used = 0.0;
  ModelParams params;
};

/// B_n(t;lambda) = lambda^{2n} Lambda^n Gamma(1/a*)^n / Gamma(n/a*) t^{n/a*-1};
/// B_0 vanishes by the 1/Gamma(0)=0 convention.
inline double bn_coefficient(const ModelParams& params, int n, double t, double lam) {
  if (n < 0) throw domain_error("bn_coefficient requires n >= 0");
  if (n == 0) return 0.0;
  if (lam == 0.0) return 0.0;
  double as = params.a_star();
  double lam2 = lam * lam;
  double big_lambda = lambda_const(params);
  double logc = n * (std::log(lam2) + std::log(big_lambda) + std::lgamma(1.0 / as)) -
                std::lgamma(n / as);
  return std::exp(logc) * std::pow(t, n / as - 1.0);
}

namespace detail {

/// Rigorous tail sum_{n>N} B_{n+1}(t) t^{-1/a} Lambda.
inline double kernel_tail_bound(const ModelParams& params, int N, double t, double lam) {
  if (lam == 0.0 || t <= 0.0) return 0.0;
  double big_lambda = lambda_const(params);
  double acc = 0.0;
  for (int m = N + 2; m <= N + 600; ++m) {
    double term = bn_coefficient(params, m, t, lam) * std::pow(t, -1.0 / params.a) * big_lambda;
    acc += term;
    if (term < 1e-18 * (acc + 1e-300) && m > N + 6) break;
  }
  return acc;
}

/// Fixed z-grid for the self-similar profiles: z_j = (j - c) dz.
struct ProfileGeom {
  double Z = 0.0;  // half width
  int nz = 0;      // odd sample count
  double dz = 0.0;
  int np = 0;      // FFT padding
  int c = 0;       // center index (nz-1)/2
};

inline ProfileGeom make_profile_geom(double z_need) {
  ProfileGeom g;
  g.dz = 1.0 / 64.0;
  int half = static_cast<int>(std::ceil(std::max(24.0, z_need) / g.dz));
  if (half > 6144) half = 6144;  // cap; beyond it the power-law tail extension applies
  g.nz = 2 * half + 1;
  g.c = half;
  g.Z = half * g.dz;
  g.np = static_cast<int>(next_pow2(static_cast<std::size_t>(2 * g.nz)));
  return g;
}

/// Samples of the continuous Fourier transform phihat(xi_q)/dz at
/// xi_q = 2 pi q / (np dz), from a center-wrapped FFT of the grid samples.
inline std::vector<std::complex<double>> profile_spectrum(const ProfileGeom& g, const Fft& fft,
                                                          const std::vector<double>& f) {
  std::vector<std::complex<double>> a(g.np, std::complex<double>(0.0, 0.0));
  for (int j = 0; j < g.nz; ++j) {
    int idx = j - g.c;
    if (idx < 0) idx += g.np;
    a[idx] = f[j];
  }
  fft.forward(a.data());
  return a;
}

/// Cubic Lagrange interpolation of a periodic complex sample array at
/// fractional index y (sample units).
inline std::complex<double> spectrum_interp(const std::vector<std::complex<double>>& a, int np,
                                            double y) {
  int q0 = static_cast<int>(std::floor(y));
  double t = y - q0;
  double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  auto at = [&](int q) {
    q %= np;
    if (q < 0) q += np;
    return a[q];
  };
  return w0 * at(q0 - 1) + w1 * at(q0) + w2 * at(q0 + 1) + w3 * at(q0 + 2);
}

/// One renewal step on profiles:
///   out(x) = int_0^1 s^{thetaA-1}(1-s)^{thetaB-1} (f_s * g_{1-s})(x) ds
/// with f_s(y) = s^{-1/a} A(y s^{-1/a}) and g likewise from B.  Ahat/Bhat
/// are profile_spectrum outputs.  The halves of [0,1] are mapped by
/// s = (1/2) u^{kappa} with kappa chosen so the Beta weight becomes a
/// polynomial and the remaining u-dependence is at least C^2.
inline std::vector<double> beta_profile_convolve(double a, const ProfileGeom& g, const Fft& fft,
                                                 const std::vector<std::complex<double>>& Ahat,
                                                 double thetaA,
                                                 const std::vector<std::complex<double>>& Bhat,
                                                 double thetaB) {
  const GaussLegendre& gl = gauss_legendre(32);
  std::vector<double> out(g.nz, 0.0);
  std::vector<std::complex<double>> prod(g.np);
  int half = g.np / 2;
  double dz2 = g.dz * g.dz;
  auto add_node = [&](double s, double w) {
    if (!(w != 0.0)) return;
    double ua = std::pow(s, 1.0 / a);
    double ub = std::pow(1.0 - s, 1.0 / a);
    for (int q = 0; q <= half; ++q)
      prod[q] = spectrum_interp(Ahat, g.np, ua * q) * spectrum_interp(Bhat, g.np, ub * q) * dz2;
    for (int q = half + 1; q < g.np; ++q) prod[q] = std::conj(prod[g.np - q]);
    fft.inverse(prod.data());
    double inv_dz = 1.0 / g.dz;
    for (int j = 0; j < g.nz; ++j) {
      int idx = j - g.c;
      if (idx < 0) idx += g.np;
      out[j] += w * prod[idx].real() * inv_dz;
    }
  };
  double ma = std::ceil(2.0 * a * thetaA), ka = ma / thetaA;
  double mb = std::ceil(2.0 * a * thetaB), kb = mb / thetaB;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double u = 0.5 * (gl.nodes[i] + 1.0);
    double gw = 0.5 * gl.weights[i];
    double s_lo = 0.5 * std::pow(u, ka);
    add_node(s_lo, gw * std::pow(0.5, thetaA) * ka * std::pow(u, ma - 1.0) *
                       std::pow(1.0 - s_lo, thetaB - 1.0));
    double s_hi = 1.0 - 0.5 * std::pow(u, kb);
    add_node(s_hi, gw * std::pow(0.5, thetaB) * kb * std::pow(u, mb - 1.0) *
                       std::pow(s_hi, thetaA - 1.0));
  }
  for (double& v : out) {
    if (!(v > 0.0)) v = 0.0;
  }
  return out;
}

/// Far-tail repair: spectral interpolation leaves an absolute noise plateau
/// of order 1e-8 of the peak.  The true profiles satisfy phi_n / phi_0 ->
/// const in each tail (identical tail exponents; exact shape equality at
/// a=2), so beyond the last reliable sample the profile is continued as
/// r * phi_0 with r fitted just inside the boundary.
inline void blend_profile_tails(std::vector<double>& f, const std::vector<double>& base) {
  int nz = static_cast<int>(f.size());
  int c = (nz - 1) / 2;
  double mx = 0.0;
  for (double v : f) mx = std::max(mx, v);
  if (!(mx > 0.0)) return;
  double th = 1e-5 * mx;
  auto one_side = [&](int dir) {
    int jb = c;
    for (int j = c; j >= 0 && j < nz; j += dir)
      if (f[static_cast<std::size_t>(j)] >= th) jb = j;
    int lo = std::min(jb, jb - dir * 63), hi = std::max(jb, jb - dir * 63);
    if (lo < 0 || hi >= nz) return;
    double num = 0.0, den = 0.0;
    for (int j = lo; j <= hi; ++j) {
      num += f[static_cast<std::size_t>(j)];
      den += base[static_cast<std::size_t>(j)];
    }
    if (!(den > 0.0)) return;
    double r = num / den;
    for (int j = jb + dir; j >= 0 && j < nz; j += dir)
      f[static_cast<std::size_t>(j)] = r * base[static_cast<std::size_t>(j)];
  };
  one_side(+1);
  one_side(-1);
}

/// Power-law continuation of a profile beyond the sampled window, fitted
/// from two interior reference points on the requested side.
inline double profile_tail_value(const ProfileGeom& geom, const std::vector<double>& f,
                                 double z) {
  double az = std::fabs(z);
  double z1 = 0.95 * geom.Z, z2 = 0.80 * geom.Z;
  int j1 = geom.c + static_cast<int>(std::lround((z > 0.0 ? z1 : -z1) / geom.dz));
  int j2 = geom.c + static_cast<int>(std::lround((z > 0.0 ? z2 : -z2) / geom.dz));
  double v1 = f[static_cast<std::size_t>(j1)], v2 = f[static_cast<std::size_t>(j2)];
  if (!(v1 > 0.0) || !(v2 > 0.0)) return 0.0;
  double p = std::log(v1 / v2) / std::log(z1 / z2);
  if (p > -1.0) p = -1.0;
  return v1 * std::pow(az / z1, p);
}

/// Log-space cubic interpolation of a nonnegative profile on its geometry,
/// with linear fallback near zeros and the power-law tail beyond.
inline double profile_value(const ProfileGeom& geom, const std::vector<double>& f, double z) {
  if (std::fabs(z) > geom.Z - 2.0 * geom.dz) return profile_tail_value(geom, f, z);
  double y = (z + geom.Z) / geom.dz;
  int j0 = static_cast<int>(std::floor(y));
  if (j0 < 1) j0 = 1;
  if (j0 > geom.nz - 3) j0 = geom.nz - 3;
  double t = y - j0;
  double v0 = f[static_cast<std::size_t>(j0 - 1)], v1 = f[static_cast<std::size_t>(j0)];
  double v2 = f[static_cast<std::size_t>(j0 + 1)], v3 = f[static_cast<std::size_t>(j0 + 2)];
  if (v0 > 0.0 && v1 > 0.0 && v2 > 0.0 && v3 > 0.0) {
    double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return std::exp(w0 * std::log(v0) + w1 * std::log(v1) + w2 * std::log(v2) +
                    w3 * std::log(v3));
  }
  double lin = v1 + t * (v2 - v1);
  return lin > 0.0 ? lin : 0.0;
}

/// Self-similar profiles phi_n = L_n(1,.) at lambda = 1.
struct KernelProfiles {
  ModelParams params;
  ProfileGeom geom;
  std::vector<std::vector<double>> phi;
  std::vector<double> mass;  // numeric integral of each profile

  double tail_value(int n, double z) const {
    return profile_tail_value(geom, phi[static_cast<std::size_t>(n)], z);
  }

  double phi_value(int n, double z) const {
    return profile_value(geom, phi[static_cast<std::size_t>(n)], z);
  }
};

/// Builds (or reuses) the profile family up to index N with grid half
/// width at least min(z_need, cap).
inline std::shared_ptr<const KernelProfiles> kernel_profiles(const ModelParams& params, int N,
                                                             double z_need) {
  static std::mutex mu;
  static std::map<std::pair<long long, long long>, std::shared_ptr<const KernelProfiles>> cache;
  std::pair<long long, long long> key{static_cast<long long>(std::llround(params.a * 1e12)),
                                      static_cast<long long>(std::llround(params.delta * 1e12))};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  double z_cap = make_profile_geom(z_need).Z;
  if (it != cache.end() && it->second->geom.Z >= z_cap - 1e-9 &&
      static_cast<int>(it->second->phi.size()) > N)
    return it->second;
  auto kp = std::make_shared<KernelProfiles>();
  kp->params = params;
  double z_old = it != cache.end() ? it->second->geom.Z : 0.0;
  kp->geom = make_profile_geom(std::max(z_need, z_old));
  int n_old = it != cache.end() ? static_cast<int>(it->second->phi.size()) - 1 : 0;
  int n_max = std::max(N, n_old);
  const ProfileGeom& g = kp->geom;
  Fft fft(static_cast<std::size_t>(g.np));
  auto prof = green_profile(params);
  kp->phi.resize(static_cast<std::size_t>(n_max) + 1);
  std::vector<double>& p0 = kp->phi[0];
  p0.resize(static_cast<std::size_t>(g.nz));
  for (int j = 0; j < g.nz; ++j) {
    double gv = prof->value((j - g.c) * g.dz);
    if (gv < 0.0) gv = 0.0;
    p0[static_cast<std::size_t>(j)] = gv * gv;
  }
  auto b0hat = profile_spectrum(g, fft, p0);
  double as = params.a_star();
  for (int n = 1; n <= n_max; ++n) {
    auto ahat = profile_spectrum(g, fft, kp->phi[static_cast<std::size_t>(n - 1)]);
    kp->phi[static_cast<std::size_t>(n)] =
        beta_profile_convolve(params.a, g, fft, ahat, n / as, b0hat, 1.0 / as);
    blend_profile_tails(kp->phi[static_cast<std::size_t>(n)], p0);
  }
  kp->mass.resize(kp->phi.size());
  for (std::size_t n = 0; n < kp->phi.size(); ++n) {
    double acc = 0.0;
    for (double v : kp->phi[n]) acc += v;
    kp->mass[n] = acc * g.dz;
  }
  cache[key] = kp;
  return kp;
}

}  // namespace detail

/// Truncated kernel series on the output grid with rigorous tail bounds.
inline KernelEstimate kernel_series(const ModelParams& params, const GridSpec& grid, double lam,
                                    double tol) {
  params.validate_solution();
  grid.validate();
  if (!(tol > 0.0)) throw domain_error("kernel_series requires tol > 0");
  KernelEstimate est;
  est.field = ScalarField(grid);
  est.lambda_used = lam;
  est.params = params;
  est.tail_bound_field.assign(grid.nt, 0.0);
  if (lam == 0.0) return est;

  int N = -1;
  for (int n = 0; n <= 200; ++n) {
    if (detail::kernel_tail_bound(params, n, grid.t_max, lam) < tol) {
      N = n;
      break;
    }
  }
  if (N < 0)
    throw accuracy_error("kernel_series: tail bound not below tolerance by N=200",
                         detail::kernel_tail_bound(params, 200, grid.t_max, lam));
  est.trunc_index = N;

  double z_need = grid.x_half_width * std::pow(grid.t_min, -1.0 / params.a) + 4.0;
  auto kp = detail::kernel_profiles(params, N, z_need);
  double as = params.a_star();
  double lam2 = lam * lam;
  for (int i = 0; i < grid.nt; ++i) {
    double t = grid.t(i);
    double scale = std::pow(t, -1.0 / params.a);
    double step = lam2 * std::pow(t, 1.0 / as);
    for (int j = 0; j < grid.nx; ++j) {
      double z = grid.x(j) * scale;
      double pref = lam2 * std::pow(t, 1.0 / as - 1.0) * scale;
      double acc = 0.0;
      for (int n = 0; n <= N; ++n) {
        acc += pref * kp->phi_value(n, z);
        pref *= step;
      }
      est.field.at(i, j) = acc;
    }
    est.tail_bound_field[i] = detail::kernel_tail_bound(params, N, t, lam);
  }
  return est;
}

/// Pointwise truncated series sum_{n=n_min}^{N} L_n(t,x;lambda) from a
/// prebuilt profile family.
inline double kernel_point(const detail::KernelProfiles& kp, int N, double lam, double t,
                           double x, int n_min = 0) {
  if (lam == 0.0 || t <= 0.0) return 0.0;
  double as = kp.params.a_star();
  double scale = std::pow(t, -1.0 / kp.params.a);
  double z = x * scale;
  double lam2 = lam * lam;
  double step = lam2 * std::pow(t, 1.0 / as);
  double pref = lam2 * std::pow(t, 1.0 / as - 1.0) * scale;
  double acc = 0.0;
  int top = std::min<int>(N, static_cast<int>(kp.phi.size()) - 1);
  for (int n = 0; n <= top; ++n) {
    if (n >= n_min) acc += pref * kp.phi_value(n, z);
    pref *= step;
  }
  return acc;
}

/// Closed-form H(t) = (1 * K_N)(t) from the exact spatial masses of L_n:
/// sum_{n=1}^{N+1} c^n a* t^{n/a*} / (n Gamma(n/a*)), c = lambda^2 Q Gamma(1/a*).
inline double h_closed_form(const ModelParams& params, double lam, double t, int N) {
  if (lam == 0.0 || t <= 0.0) return 0.0;
  double as = params.a_star();
  double q = green_profile(params)->integral_sq();
  double c = lam * lam * q * gamma_fn(1.0 / as);
  double acc = 0.0;
  for (int n = 1; n <= N + 1; ++n)
    acc += std::exp(n * std::log(c) - std::lgamma(n / as)) * as * std::pow(t, n / as) / n;
  return acc;
}

/// Mittag-Leffler pointwise upper bound on K.
inline double kernel_upper_bound(const ModelParams& params, double t, double x, double lam) {
  params.validate_solution();
  if (!(t > 0.0)) throw domain_error("kernel_upper_bound requires t > 0");
  if (lam == 0.0) return 0.0;
  double as = params.a_star();
  double gamma = lam * lam * lambda_const(params) * gamma_fn(1.0 / as);
  double ml = mittag_leffler({1.0 / as, 1.0 / as}, gamma * std::pow(t, 1.0 / as));
  return green_density(params, t, x) * gamma * std::pow(t, -1.0 / params.a) * ml;
}

/// Lower-bound constants (strict regime).
inline double c_nu_const(double nu) {
  if (!(nu >= 0.5)) throw domain_error("C_nu requires nu >= 1/2");
  return gamma_fn(nu) * gamma_fn(0.5) / (2.0 * gamma_fn(nu + 0.5));
}

inline double upsilon_const(const ModelParams& params, double lam) {
  params.validate_strict();
  double ct = c_tilde(params);
  double cnu = c_nu_const(params.a + 0.5);
  double g = gamma_fn(1.0 - 1.0 / params.a);
  return std::pow(lam, 4.0) * std::pow(ct, 4.0) * cnu * cnu / 2.0 * g * g;
}

/// Pointwise g_1-type lower bound on K (strict regime).
inline double kernel_lower_bound(const ModelParams& params, double t, double x, double lam) {
  params.validate_strict();
  if (!(t > 0.0)) throw domain_error("kernel_lower_bound requires t > 0");
  if (lam == 0.0) return 0.0;
  double b = params.b();
  double ups = upsilon_const(params, lam);
  double C = std::sqrt(2.0) * ups;  // 2^{-1/2} lam^4 Ct^4 Cnu^2 Gamma(1-1/a)^2
  double ml = mittag_leffler({b, b}, ups * std::pow(t, b));
  return C * std::pow(t, b - 1.0) * g_a_kernel(1.0, std::pow(t, 1.0 / params.a), x) * ml;
}

/// Lower bound for H(t) = (1 * K)(t).
inline double h_lower_bound(const ModelParams& params, double t, double lam) {
  params.validate_strict();
  if (lam == 0.0 || t <= 0.0) return 0.0;
  double b = params.b();
  double ups = upsilon_const(params, lam);
  double C = std::sqrt(2.0) * ups;
  return C * std::pow(t, b) * mittag_leffler({b, b + 1.0}, ups * std::pow(t, b));
}

/// H(t;lambda) per output slice: trapezoid over the tabulated field with an
/// analytic tail-in-x correction and a closed-form [0,t_min] head
/// (spatial integrals of L_n are exact Beta-type expressions).
inline std::vector<double> h_function(const KernelEstimate& est) {
  const GridSpec& grid = est.field.grid;
  std::vector<double> H(grid.nt, 0.0);
  if (est.lambda_used == 0.0) return H;
  const ModelParams& params = est.params;
  auto prof = green_profile(params);
  double as = params.a_star();
  double q = prof->integral_sq();
  double c = est.lambda_used * est.lambda_used * q * gamma_fn(1.0 / as);
  auto head = [&](double t) {
    // sum_{n=1}^{N+1} c^n a* t^{n/a*} / (n Gamma(n/a*))
    double acc = 0.0;
    for (int n = 1; n <= est.trunc_index + 1; ++n)
      acc += std::exp(n * std::log(c) - std::lgamma(n / as)) * as * std::pow(t, n / as) / n;
    return acc;
  };
  // spatial integral of each tabulated slice, with power-tail correction
  std::vector<double> m(grid.nt, 0.0);
  for (int i = 0; i < grid.nt; ++i) {
    double acc = 0.0;
    for (int j = 0; j < grid.nx; ++j) acc += est.field.at(i, j);
    acc *= grid.dx();
    // |x|^{-1-a} extrapolation beyond both edges
    double xe = grid.x_half_width;
    acc += (est.field.at(i, 0) + est.field.at(i, grid.nx - 1)) * xe / params.a;
    m[i] = acc;
  }
  double h0 = head(grid.t_min);
  for (int i = 0; i < grid.nt; ++i) {
    double acc = h0;
    for (int k = 1; k <= i; ++k) acc += 0.5 * grid.dt() * (m[k - 1] + m[k]);
    H[i] = acc;
  }
  return H;
}

/// Heat-operator closed form of K for d/dt - (nu/2) Laplacian.
inline double kernel_heat_closed_form(double t, double x, double lam, double nu = 2.0) {
  if (!(t > 0.0)) throw domain_error("kernel_heat_closed_form requires t > 0");
  double c = nu / 2.0;
  double g = std::exp(-x * x / (2.0 * c * t)) / std::sqrt(2.0 * kPi * c * t);
  double z = lam * lam * std::sqrt(t / (2.0 * nu));
  double phi = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return g * (lam * lam / std::sqrt(4.0 * kPi * nu * t) +
              std::pow(lam, 4.0) / (2.0 * nu) * std::exp(std::pow(lam, 4.0) * t / (4.0 * nu)) * phi);
}

/// Diagnostic constant C(a,delta,lambda) of the kernel upper bound: bounded log-grid scan
/// plus the analytic t -> infinity limit a* gamma^{a*}.
inline double c_upper_scan(const ModelParams& params, double lam) {
  params.validate_solution();
  if (lam == 0.0) return 0.0;
  double as = params.a_star();
  double gamma = lam * lam * lambda_const(params) * gamma_fn(1.0 / as);
  double sup = as * std::pow(gamma, as);  // limiting ratio
  for (double t = 1e-6; t <= 1e4; t *= 1.15) {
    double expo = std::pow(gamma, as) * t;
    if (expo > 600.0) break;
    double num = gamma * mittag_leffler({1.0 / as, 1.0 / as}, gamma * std::pow(t, 1.0 / as));
    double den = 1.0 + std::pow(t, 1.0 / params.a) * std::exp(expo);
    if (num / den > sup) sup = num / den;
  }
  return sup;
}

}  // namespace fsheat
