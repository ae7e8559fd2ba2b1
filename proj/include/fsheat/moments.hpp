#pragma once

// Initial-data handling (J0), exact second moments in the near-linear case,
// p-th moment upper/lower bounds, and two-point correlation bounds.
//
// The kernel convolutions exploit structure wherever it exists:
//   - atoms contribute (J0^2 * K) exactly through the profile family,
//     since m^2 G^2(.,.-x0) * K = m^2 (K - L_0)(.,.-x0) / lambda^2;
//   - a constant density c contributes c^2 H(t) (and v^2 * K = v^2 H(t));
//   - what remains (atom cross terms, non-uniform densities) is bounded on
//     ]0,t] x R and integrated by quadrature against the kernel slices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/grid.hpp"
#include "fsheat/kernel.hpp"
#include "fsheat/measure.hpp"
#include "fsheat/model.hpp"
#include "fsheat/quadrature.hpp"
#include "fsheat/specfun.hpp"
#include "fsheat/stable_green.hpp"

namespace fsheat {

/// Burkholder-Davis-Gundy constant: z_2 = 1, z_p <= 2 sqrt(p) for p > 2.
inline double z_p_const(int p) {
  if (p < 2 || p % 2 != 0) throw domain_error("z_p requires even p >= 2");
  return p == 2 ? 1.0 : 2.0 * std::sqrt(static_cast<double>(p));
}

/// a_{p,Vbar}: 1 for p = 2; sqrt(2) for p > 2, Vbar = 0; 2^{(p-1)/p} otherwise.
inline double a_pv_const(int p, double vbar) {
  if (p < 2 || p % 2 != 0) throw domain_error("a_{p,V} requires even p >= 2");
  if (p == 2) return 1.0;
  return vbar != 0.0 ? std::pow(2.0, (p - 1.0) / p) : std::sqrt(2.0);
}

struct MomentConstants {
  double gamma_bar = 0.0;    // Lip^2 Lambda Gamma(1/a*)
  double gamma_low = 0.0;    // l^2 Lambda Gamma(1/a*)
  double gamma_hat_p = 0.0;  // a_{p,V}^2 z_p^2 Lip^2 Lambda Gamma(1/a*)
  double z_p = 0.0;
  double a_pv = 0.0;
};

inline MomentConstants moment_constants(const ModelParams& params, int p) {
  params.validate_solution();
  MomentConstants mc;
  double lg = lambda_const(params) * gamma_fn(1.0 / params.a_star());
  mc.z_p = z_p_const(p);
  mc.a_pv = a_pv_const(p, params.vip_upper);
  mc.gamma_bar = params.lip_upper * params.lip_upper * lg;
  mc.gamma_low = params.lip_lower * params.lip_lower * lg;
  double lp = mc.a_pv * mc.z_p * params.lip_upper;
  mc.gamma_hat_p = lp * lp * lg;
  return mc;
}

/// J0(t,x) = int mu(dy) G(t,x-y): atoms summed exactly via the scaled
/// profile, density parts by quadrature with tail-mass corrections.
inline double j0_point(const ModelParams& params, const InitialMeasure& mu, double t,
                       double x) {
  if (!(t > 0.0)) throw domain_error("j0_point requires t > 0");
  auto prof = green_profile(params);
  double scale = std::pow(t, -1.0 / params.a);
  double acc = 0.0;
  for (const auto& at : mu.atoms) acc += at.mass * scale * prof->value((x - at.location) * scale);
  if (mu.has_density || mu.tail != TailModel::none) {
    if (mu.is_uniform_density()) {
      acc += mu.tail_level * prof->total_mass();
    } else {
      double t1a = std::pow(t, 1.0 / params.a);
      const auto& pv = prof->samples();
      const int stride = 4;
      double h = prof->grid_step() * stride;
      double sum = 0.0;
      for (std::size_t i = 0; i < pv.size(); i += stride)
        sum += pv[i] * mu.density_value(x - prof->sample_x(i) * t1a);
      sum *= h;
      double xe = prof->extent();
      sum += prof->mass_above(xe) * mu.density_value(x - (xe + 2.0) * t1a);
      sum += (prof->total_mass() - prof->mass_above(-xe)) *
             mu.density_value(x + (xe + 2.0) * t1a);
      acc += sum;
    }
  }
  return acc;
}

inline ScalarField j0_field(const ModelParams& params, const InitialMeasure& mu,
                            const GridSpec& grid) {
  params.validate_density();
  grid.validate();
  mu.validate();
  if (!admissible(params, mu)) throw domain_error("j0_field: measure not admissible");
  ScalarField out(grid);
  for (int i = 0; i < grid.nt; ++i) {
    double t = grid.t(i);
    for (int j = 0; j < grid.nx; ++j) out.at(i, j) = j0_point(params, mu, t, grid.x(j));
  }
  return out;
}

/// Upper envelope for the homogeneous part: J0(s,y) <= A_a K_{a,0} (t v 1)^{1+1/a} s^{-1/a}.
inline double j0_growth_bound(const ModelParams& params, const InitialMeasure& mu,
                              double t_horizon, double s) {
  if (!(s > 0.0)) throw domain_error("j0_growth_bound requires s > 0");
  return a_a_const(params, mu) * k_a0_const(params) *
         std::pow(std::max(t_horizon, 1.0), 1.0 + 1.0 / params.a) *
         std::pow(s, -1.0 / params.a);
}

/// Lower envelope for the homogeneous part: J0(t,x) >= C 1_{t>=eps} g_a(t, sqrt2 x).
inline double j0_lower_envelope(const ModelParams& params, const InitialMeasure& mu,
                                double eps, double t, double x) {
  if (!(t > 0.0)) throw domain_error("j0_lower_envelope requires t > 0");
  if (t < eps) return 0.0;
  return j0_lower_constant(params, mu, eps) * g_a_kernel(params.a, t, std::sqrt(2.0) * x);
}

namespace detail {

/// Shared pieces of a kernel-convolution quadrature at coupling lam.
struct KernelQuad {
  ModelParams params;
  double lam = 0.0;
  int N = 0;
  std::shared_ptr<const KernelProfiles> kp;
};

inline KernelQuad make_kernel_quad(const ModelParams& params, double lam, double t_max,
                                   double tol) {
  KernelQuad c;
  c.params = params;
  c.lam = lam;
  if (lam == 0.0) return c;
  int N = -1;
  for (int n = 0; n <= 200; ++n) {
    if (kernel_tail_bound(params, n, t_max, lam) < tol) {
      N = n;
      break;
    }
  }
  if (N < 0)
    throw accuracy_error("moments: kernel tail bound not below tolerance by N=200",
                         kernel_tail_bound(params, 200, t_max, lam));
  c.N = N;
  c.kp = kernel_profiles(params, N, 24.0);
  return c;
}

/// (f * K)(t,x) for f bounded on ]0,t] x R.  Spatial integrals ride the
/// kernel slice in self-similar variables; both time endpoints are removed
/// with the substitution s = (t/2) r^{2a*}.
inline double conv_point_kernel(const KernelQuad& c, double t, double x,
                                const std::function<double(double, double)>& f) {
  if (c.lam == 0.0 || !(t > 0.0)) return 0.0;
  const KernelProfiles& kp = *c.kp;
  const ProfileGeom& g = kp.geom;
  double a = c.params.a;
  double as = c.params.a_star();
  int stride = std::max(1, (g.nz - 1) / 2048);
  double hw = g.dz * stride;
  double q = green_profile(c.params)->integral_sq();
  double lam2 = c.lam * c.lam;
  std::vector<double> pref(static_cast<std::size_t>(c.N) + 1);

  auto slice = [&](double s) {
    double u = t - s;
    if (!(u > 0.0) || !(s > 0.0)) return 0.0;
    double u1a = std::pow(u, 1.0 / a);
    double pr = lam2 * std::pow(u, 1.0 / as - 1.0);
    double step = lam2 * std::pow(u, 1.0 / as);
    for (int n = 0; n <= c.N; ++n) {
      pref[static_cast<std::size_t>(n)] = pr;
      pr *= step;
    }
    double acc = 0.0;
    for (int j = 0; j < g.nz; j += stride) {
      double kw = 0.0;
      for (int n = 0; n <= c.N; ++n)
        kw += pref[static_cast<std::size_t>(n)] * kp.phi[static_cast<std::size_t>(n)]
                                                       [static_cast<std::size_t>(j)];
      if (kw == 0.0) continue;
      double w = (j - g.c) * g.dz;
      acc += kw * f(s, x - w * u1a);
    }
    acc *= hw;
    // spatial mass beyond the profile window, weighted by f at the edges
    double fedge = 0.5 * (f(s, x - g.Z * u1a) + f(s, x + g.Z * u1a));
    if (fedge != 0.0) {
      for (int n = 0; n <= c.N; ++n) {
        double mex = std::exp((n + 1) * (std::log(q) + std::lgamma(1.0 / as)) -
                              std::lgamma((n + 1.0) / as));
        double tailm = mex - kp.mass[static_cast<std::size_t>(n)];
        if (tailm > 0.0) acc += pref[static_cast<std::size_t>(n)] * tailm * fedge;
      }
    }
    return acc;
  };

  const GaussLegendre& gl = gauss_legendre(20);
  double kap = 2.0 * as;
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double r = 0.5 * (gl.nodes[i] + 1.0);
    double jac = 0.5 * gl.weights[i] * 0.5 * t * kap * std::pow(r, kap - 1.0);
    double s = 0.5 * t * std::pow(r, kap);
    acc += jac * (slice(s) + slice(t - s));
  }
  return acc;
}

/// Plan for (J0^2 * K): exact atom and uniform-density parts plus a
/// bounded remainder handled by conv_point_kernel.
struct J02Plan {
  KernelQuad quad;
  InitialMeasure mu;
  bool uniform = false;
  double uniform_level = 0.0;
  bool need_rest = false;
};

inline J02Plan make_j02_plan(const ModelParams& params, const InitialMeasure& mu, double lam,
                             double t_max, double tol) {
  J02Plan pl;
  pl.quad = make_kernel_quad(params, lam, t_max, tol);
  pl.mu = mu;
  pl.uniform = mu.is_uniform_density();
  pl.uniform_level = pl.uniform ? mu.tail_level : 0.0;
  bool density_rest = (mu.has_density || mu.tail != TailModel::none) && !pl.uniform;
  pl.need_rest = density_rest || mu.atoms.size() >= 2 ||
                 (!mu.atoms.empty() && (mu.has_density || mu.tail != TailModel::none));
  return pl;
}

/// J0^2 minus the parts convolved exactly (atom diagonals, uniform level).
inline double j02_rest(const ModelParams& params, const J02Plan& pl, double s, double y) {
  double j0 = j0_point(params, pl.mu, s, y);
  double sub = pl.uniform_level * pl.uniform_level;
  auto prof = green_profile(params);
  double scale = std::pow(s, -1.0 / params.a);
  for (const auto& at : pl.mu.atoms) {
    double gv = scale * prof->value((y - at.location) * scale);
    sub += at.mass * at.mass * gv * gv;
  }
  return j0 * j0 - sub;
}

inline double conv_j02_point(const ModelParams& params, const J02Plan& pl, double t,
                             double x) {
  if (pl.quad.lam == 0.0) return 0.0;
  double lam = pl.quad.lam;
  double acc = 0.0;
  for (const auto& at : pl.mu.atoms)
    acc += at.mass * at.mass *
           kernel_point(*pl.quad.kp, pl.quad.N, lam, t, x - at.location, 1) / (lam * lam);
  if (pl.uniform)
    acc += pl.uniform_level * pl.uniform_level * h_closed_form(params, lam, t, pl.quad.N);
  if (pl.need_rest)
    acc += conv_point_kernel(pl.quad, t, x,
                             [&](double s, double y) { return j02_rest(params, pl, s, y); });
  return acc;
}

/// cj0 J0^2 + vv^2 H + cj0 (J0^2 * K) at coupling lam.
inline ScalarField moment_field(const ModelParams& params, const InitialMeasure& mu,
                                const GridSpec& grid, double lam, double vv, double cj0,
                                double tol) {
  params.validate_solution();
  grid.validate();
  mu.validate();
  ScalarField j0 = j0_field(params, mu, grid);
  ScalarField out(grid);
  if (lam == 0.0 || (mu.is_zero() && vv == 0.0)) {
    for (int i = 0; i < grid.nt; ++i)
      for (int j = 0; j < grid.nx; ++j)
        out.at(i, j) = cj0 * j0.at(i, j) * j0.at(i, j);
    return out;
  }
  J02Plan pl = make_j02_plan(params, mu, lam, grid.t_max, tol);
  for (int i = 0; i < grid.nt; ++i) {
    double t = grid.t(i);
    double h = h_closed_form(params, lam, t, pl.quad.N);
    for (int j = 0; j < grid.nx; ++j) {
      double v0 = j0.at(i, j);
      out.at(i, j) =
          cj0 * (v0 * v0 + conv_j02_point(params, pl, t, grid.x(j))) + vv * vv * h;
    }
  }
  if (!out.all_finite()) throw accuracy_error("moment_field: non-finite values", 0.0);
  return out;
}

}  // namespace detail

/// Exact second moment for rho(x)^2 = lambda^2 (v^2 + x^2):
/// J0^2 + ((v^2 + J0^2) * K) at lambda = params.lambda.
inline ScalarField second_moment_exact(const ModelParams& params, const InitialMeasure& mu,
                                       const GridSpec& grid, double vv) {
  return detail::moment_field(params, mu, grid, params.lambda, vv, 1.0, 1e-8);
}

/// p-th moment upper bound: p = 2 uses K at Lip; p > 2 uses K-hat at a_{p,V} z_p Lip.
inline ScalarField pth_moment_upper(const ModelParams& params, const InitialMeasure& mu,
                                    const GridSpec& grid, int p) {
  if (p < 2 || p % 2 != 0) throw domain_error("pth_moment_upper requires even p >= 2");
  if (p == 2)
    return detail::moment_field(params, mu, grid, params.lip_upper, params.vip_upper, 1.0,
                                1e-8);
  double lam_p = a_pv_const(p, params.vip_upper) * z_p_const(p) * params.lip_upper;
  return detail::moment_field(params, mu, grid, lam_p, params.vip_upper, 2.0, 1e-8);
}

/// Second moment lower bound: J0^2 + ((v_low^2 + J0^2) * K) at lambda = l_rho.
inline ScalarField second_moment_lower(const ModelParams& params, const InitialMeasure& mu,
                                       const GridSpec& grid) {
  return detail::moment_field(params, mu, grid, params.lip_lower, params.vip_lower, 1.0,
                              1e-8);
}

enum class TwoPointMode { upper, lower, exact };

/// The printed formula evaluates the convolution term at (r,y); the variant
/// evaluates it at the integration point (r,z) instead (see the ledger).
enum class TwoPointVariant { printed, integrand };

/// J0(t,x) J0(tau,y) + I(t,x,tau,y; v, lambda) with
/// I = lambda^2 int_0^t dr int dz [J0^2(r,z) + (J0^2*K)(r,.) + v^2(H(r)+1)]
///       G(t-r,x-z) G(tau-r,y-z).
inline double two_point_bound(const ModelParams& params, const InitialMeasure& mu, double t,
                              double x, double tau, double y, TwoPointMode which, double vv,
                              double lam,
                              TwoPointVariant variant = TwoPointVariant::printed) {
  params.validate_solution();
  mu.validate();
  if (!(t > 0.0) || tau < t) throw domain_error("two_point_bound requires tau >= t > 0");
  double v_use = vv, lam_use = lam;
  if (which == TwoPointMode::upper) {
    v_use = params.vip_upper;
    lam_use = params.lip_upper;
  } else if (which == TwoPointMode::lower) {
    v_use = params.vip_lower;
    lam_use = params.lip_lower;
  }
  double base = j0_point(params, mu, t, x) * j0_point(params, mu, tau, y);
  if (lam_use == 0.0) return base;

  detail::J02Plan pl = detail::make_j02_plan(params, mu, lam_use, t, 1e-8);
  const detail::KernelProfiles& kp = *pl.quad.kp;
  auto prof = green_profile(params);
  double a = params.a;
  double as = params.a_star();
  const auto& pv = prof->samples();
  const int pstride = 4;
  double ph = prof->grid_step() * pstride;
  double xe = prof->extent();

  auto gp = [&](double u, double w) {
    double sc = std::pow(u, -1.0 / a);
    return sc * prof->value(w * sc);
  };

  // int F(z) G(t-r,x-z) G(tau-r,y-z) dz with z = x - zeta (t-r)^{1/a}:
  // the substitution always resolves both factors since tau >= t.
  auto smooth_int = [&](double r, const std::function<double(double)>& F) {
    double k1 = std::pow(t - r, 1.0 / a);
    double acc = 0.0;
    for (std::size_t i = 0; i < pv.size(); i += pstride) {
      if (pv[i] == 0.0) continue;
      double z = x - prof->sample_x(i) * k1;
      acc += pv[i] * F(z) * gp(tau - r, y - z);
    }
    acc *= ph;
    double zr = x - (xe + 2.0) * k1, zl = x + (xe + 2.0) * k1;
    acc += prof->mass_above(xe) * F(zr) * gp(tau - r, y - zr);
    acc += (prof->total_mass() - prof->mass_above(-xe)) * F(zl) * gp(tau - r, y - zl);
    return acc;
  };

  // atom-diagonal part of J0^2, resolved on the atom scale r^{1/a}
  auto atom_diag_int = [&](double r) {
    if (pl.mu.atoms.empty()) return 0.0;
    double r1a = std::pow(r, 1.0 / a), rs = std::pow(r, -1.0 / a);
    double acc = 0.0;
    for (const auto& at : pl.mu.atoms) {
      double s = 0.0;
      for (std::size_t i = 0; i < pv.size(); i += pstride) {
        if (pv[i] == 0.0) continue;
        double off = at.location + prof->sample_x(i) * r1a;
        s += pv[i] * pv[i] * gp(t - r, x - off) * gp(tau - r, y - off);
      }
      acc += at.mass * at.mass * rs * s * ph;
    }
    return acc;
  };

  // atom part of (J0^2 * K)(r,z), integrand variant, on the kernel grid
  const detail::ProfileGeom& kg = kp.geom;
  int kstride = std::max(1, (kg.nz - 1) / 1536);
  double kh = kg.dz * kstride;
  double lam2 = lam_use * lam_use;
  auto atom_conv_int = [&](double r) {
    if (pl.mu.atoms.empty() || pl.quad.N < 1) return 0.0;
    double r1a = std::pow(r, 1.0 / a);
    std::vector<double> pref(static_cast<std::size_t>(pl.quad.N) + 1, 0.0);
    double pr = lam2 * std::pow(r, 2.0 / as - 1.0 - 1.0 / a);
    double step = lam2 * std::pow(r, 1.0 / as);
    for (int n = 1; n <= pl.quad.N; ++n) {
      pref[static_cast<std::size_t>(n)] = pr;
      pr *= step;
    }
    double acc = 0.0;
    for (const auto& at : pl.mu.atoms) {
      double s = 0.0;
      for (int j = 0; j < kg.nz; j += kstride) {
        double wv = 0.0;
        for (int n = 1; n <= pl.quad.N; ++n)
          wv += pref[static_cast<std::size_t>(n)] *
                kp.phi[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
        if (wv == 0.0) continue;
        double off = at.location + (j - kg.c) * kg.dz * r1a;
        s += wv * gp(t - r, x - off) * gp(tau - r, y - off);
      }
      acc += at.mass * at.mass * r1a * s * kh;
    }
    return acc;
  };

  auto h_plus_one = [&](double r) {
    return h_closed_form(params, lam_use, r, pl.quad.N) + 1.0;
  };
  // the smooth part of (J0^2 * K)(r,z): uniform level plus bounded remainder
  auto conv_smooth = [&](double r, double z) {
    double acc = 0.0;
    if (pl.uniform)
      acc += pl.uniform_level * pl.uniform_level *
             h_closed_form(params, lam_use, r, pl.quad.N);
    if (pl.need_rest)
      acc += detail::conv_point_kernel(
          pl.quad, r, z, [&](double s, double w) { return detail::j02_rest(params, pl, s, w); });
    return acc;
  };

  auto integrand_lower = [&](double r) {
    double vterm = v_use * v_use * h_plus_one(r) + pl.uniform_level * pl.uniform_level;
    double conv_const = 0.0;
    std::function<double(double)> fs;
    if (variant == TwoPointVariant::printed) {
      conv_const = detail::conv_j02_point(params, pl, r, y);
      fs = [&](double z) { return detail::j02_rest(params, pl, r, z) + vterm + conv_const; };
    } else {
      fs = [&](double z) {
        return detail::j02_rest(params, pl, r, z) + vterm + conv_smooth(r, z);
      };
    }
    double acc = smooth_int(r, fs) + atom_diag_int(r);
    if (variant == TwoPointVariant::integrand) acc += atom_conv_int(r);
    return acc;
  };

  auto integrand_upper = [&](double r) {
    double vterm = v_use * v_use * h_plus_one(r);
    double conv_const = variant == TwoPointVariant::printed
                            ? detail::conv_j02_point(params, pl, r, y)
                            : 0.0;
    return smooth_int(r, [&](double z) {
      double j0v = j0_point(params, pl.mu, r, z);
      double cv = variant == TwoPointVariant::printed ? conv_const
                                                      : detail::conv_j02_point(params, pl, r, z);
      return j0v * j0v + cv + vterm;
    });
  };

  const GaussLegendre& gl = gauss_legendre(16);
  double kap = 2.0 * as;
  double integral = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double rr = 0.5 * (gl.nodes[i] + 1.0);
    double jac = 0.5 * gl.weights[i] * 0.5 * t * kap * std::pow(rr, kap - 1.0);
    double r_lo = 0.5 * t * std::pow(rr, kap);
    integral += jac * integrand_lower(r_lo);
    integral += jac * integrand_upper(t - r_lo);
  }
  return base + lam2 * integral;
}

/// Growth bound on (J0^2 * K) with constants at the gamma-hat_p kernel level.
inline double j20k_growth_bound(const ModelParams& params, const InitialMeasure& mu, double t,
                                int p) {
  if (!(t > 0.0)) throw domain_error("j20k_growth_bound requires t > 0");
  double as = params.a_star();
  double lam_p = a_pv_const(p, params.vip_upper) * z_p_const(p) * params.lip_upper;
  double gamma = lam_p * lam_p * lambda_const(params) * gamma_fn(1.0 / as);
  double cc = c_upper_scan(params, lam_p);
  double aa = a_a_const(params, mu);
  double k0 = k_a0_const(params);
  double g1 = gamma_fn(1.0 / as);
  double cprime = cc * aa * aa * k0 * k0 * std::max(as, g1 * g1 / gamma_fn(2.0 / as));
  double tb = std::max(t, 1.0);
  return cprime * std::pow(tb, 2.0 * (1.0 + 1.0 / params.a)) *
         std::pow(t, 1.0 - 2.0 / params.a) *
         (std::pow(t, -1.0 / params.a) + std::exp(std::pow(gamma, as) * t));
}

struct MomentReport {
  int p = 2;
  bool has_exact = false;
  ScalarField second_moment_exact_field;
  ScalarField upper_field;
  ScalarField lower_field;
  struct TwoPointSample {
    double t = 0.0, x = 0.0, tau = 0.0, y = 0.0;
    double upper = 0.0, lower = 0.0;
  };
  std::vector<TwoPointSample> two_point_samples;
  MomentConstants constants;
};

/// Assembles the full report; the exact field is included when the model is
/// flagged as near-linear (rho(x)^2 = lambda^2 (vv^2 + x^2)).
inline MomentReport build_moment_report(const ModelParams& params, const InitialMeasure& mu,
                                        const GridSpec& grid, int p, double vv,
                                        bool near_linear) {
  MomentReport rep;
  rep.p = p;
  rep.constants = moment_constants(params, p);
  rep.upper_field = pth_moment_upper(params, mu, grid, p);
  rep.lower_field = second_moment_lower(params, mu, grid);
  if (near_linear) {
    rep.has_exact = true;
    rep.second_moment_exact_field = second_moment_exact(params, mu, grid, vv);
  }
  double tm = grid.t_min, tx = grid.t_max;
  double xs[2] = {0.0, 0.5 * grid.x_half_width};
  for (double xx : xs) {
    MomentReport::TwoPointSample s;
    s.t = 0.5 * (tm + tx);
    s.x = xx;
    s.tau = tx;
    s.y = -xx;
    s.upper = two_point_bound(params, mu, s.t, s.x, s.tau, s.y, TwoPointMode::upper, vv,
                              params.lambda);
    s.lower = two_point_bound(params, mu, s.t, s.x, s.tau, s.y, TwoPointMode::lower, vv,
                              params.lambda);
    rep.two_point_samples.push_back(s);
  }
  return rep;
}

}  // namespace fsheat
