#pragma once

// Executable inequality checks for the quantitative lemmas: each check
// samples random points (fixed seed), evaluates both sides with brute-force
// quadrature, and records the worst relative margin RHS-LHS (>= 0 passes).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/kernel.hpp"
#include "fsheat/measure.hpp"
#include "fsheat/model.hpp"
#include "fsheat/moments.hpp"
#include "fsheat/quadrature.hpp"
#include "fsheat/rng.hpp"
#include "fsheat/specfun.hpp"
#include "fsheat/stable_green.hpp"

namespace fsheat {

struct CheckResult {
  std::string name;
  int points_tested = 0;
  double worst_margin = 0.0;  // min over samples of (RHS-LHS)/scale
  double tolerance = 1e-6;
  bool pass = false;
};

namespace detail {

struct MarginAcc {
  double worst = 1e300;
  int points = 0;
  // inequality lhs <= rhs, margin normalized by the larger magnitude
  void le(double lhs, double rhs) {
    double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
    worst = std::min(worst, (rhs - lhs) / scale);
    ++points;
  }
  void ge(double lhs, double rhs) { le(rhs, lhs); }
  CheckResult done(const std::string& name, double tol = 1e-6) const {
    CheckResult r;
    r.name = name;
    r.points_tested = points;
    r.worst_margin = points ? worst : 0.0;
    r.tolerance = tol;
    r.pass = r.worst_margin >= -tol;
    return r;
  }
};

/// int_U^inf cos(h xi) xi^{-p} dxi by four integrations by parts (h U >> 1).
inline double cos_tail(double U, double h, double p) {
  double s = std::sin(h * U), c = std::cos(h * U);
  double t1 = -s * std::pow(U, -p) / h;
  double t2 = p * c * std::pow(U, -p - 1.0) / (h * h);
  double t3 = p * (p + 1.0) * s * std::pow(U, -p - 2.0) / (h * h * h);
  double t4 = -p * (p + 1.0) * (p + 2.0) * c * std::pow(U, -p - 3.0) / (h * h * h * h);
  return t1 + t2 + t3 + t4;
}

/// int over geometric panels [hi*10^-decades, hi] plus caller tails.
template <typename F>
inline double geo_panels(F&& f, double hi, int n_seg, int decades = 16, int order = 8) {
  double lo = hi * std::pow(10.0, -decades);
  double ratio = std::pow(hi / lo, 1.0 / n_seg);
  double acc = 0.0;
  double a = lo;
  for (int k = 0; k < n_seg; ++k) {
    double b = std::min(hi, a * ratio);
    acc += gl_panels(f, a, b, 1, order);
    a = b;
  }
  return acc;
}

/// Space-increment LHS: (1/pi c) int_0^inf (1-e^{-2 t c xi^a})(1-cos(xi h)) xi^{-a} dxi.
/// Below the first oscillation geometric panels resolve the damping scale;
/// beyond it uniform panels track the cosine; the tail is integrated by parts.
inline double gx_lhs(double a, double beta, double t, double h) {
  h = std::fabs(h);
  if (h == 0.0) return 0.0;
  double c = std::cos(beta);
  auto f = [&](double xi) {
    return (1.0 - std::exp(-2.0 * t * c * std::pow(xi, a))) * (1.0 - std::cos(xi * h)) *
           std::pow(xi, -a);
  };
  double Xi = std::max({std::pow(27.6 / (2.0 * t * c), 1.0 / a), 200.0 / h, 4.0});
  double xo = std::min(Xi, 1.0 / h);
  double body = geo_panels(f, xo, 240, 12);
  if (Xi > xo) {
    int panels =
        std::max(64, static_cast<int>(4.0 * std::ceil((Xi - xo) * h / (2.0 * kPi))));
    if (panels > 200000)
      throw accuracy_error("gx_lhs: oscillation count too large", panels);
    body += gl_panels(f, xo, Xi, panels, 8);
  }
  double tail = std::pow(Xi, 1.0 - a) / (a - 1.0) - cos_tail(Xi, h, a);
  return (body + tail) / (kPi * c);
}

/// C1 = (1/pi c) int_0^inf (1-cos u) u^{-a} du.
inline double c1_const(double a, double beta) {
  const double U = 1000.0;
  double body = gl_panels(
      [&](double u) { return (1.0 - std::cos(u)) * std::pow(u, -a); }, 0.0, U, 800, 8);
  double tail = std::pow(U, 1.0 - a) / (a - 1.0) - cos_tail(U, 1.0, a);
  return (body + tail) / (kPi * std::cos(beta));
}

/// First time-increment LHS in w = |xi|^a variables:
/// (1/(2 pi c a)) int_0^inf (1-e^{-2scw})(1-2e^{-qcw}cos(q sb w)+e^{-2qcw}) w^{1/a-2} dw.
inline double gt1_lhs(double a, double beta, double s, double q) {
  if (s <= 0.0 || q <= 0.0) return 0.0;
  double c = std::cos(beta), sb = std::fabs(std::sin(beta));
  double hi = 40.0 * std::max(1.0 / (q * c), 1.0 / (2.0 * s * c));
  int nseg = 320 * std::max(1, static_cast<int>(std::ceil(sb / c)));
  double body = geo_panels(
      [&](double w) {
        double damp = std::exp(-q * c * w);
        double br = 1.0 - 2.0 * damp * std::cos(q * sb * w) + damp * damp;
        return (1.0 - std::exp(-2.0 * s * c * w)) * br * std::pow(w, 1.0 / a - 2.0);
      },
      hi, nseg);
  double tail = std::pow(hi, 1.0 / a - 1.0) / (1.0 - 1.0 / a);
  return (body + tail) / (2.0 * kPi * c * a);
}

/// Second time-increment LHS: (1/(2 pi c a)) int_0^inf (1-e^{-2 q c w}) w^{1/a-2} dw.
inline double gt2_lhs(double a, double beta, double q) {
  if (q <= 0.0) return 0.0;
  double c = std::cos(beta);
  double hi = 40.0 / (q * c);
  double body = geo_panels(
      [&](double w) {
        return (1.0 - std::exp(-2.0 * q * c * w)) * std::pow(w, 1.0 / a - 2.0);
      },
      hi, 320);
  double tail = std::pow(hi, 1.0 / a - 1.0) / (1.0 - 1.0 / a);
  return (body + tail) / (2.0 * kPi * c * a);
}

inline double log_uniform(CounterRng& rng, double lo, double hi) {
  return lo * std::pow(hi / lo, rng.next_uniform());
}

}  // namespace detail

/// The three Green-increment inequalities.  The C2/C3 constants
/// are checked under both the statement's and the proof's formulas.
inline std::vector<CheckResult> check_prop_g(const ModelParams& params, int samples) {
  params.validate_solution();
  if (samples < 4) throw domain_error("check_prop_g requires samples >= 4");
  const double a = params.a;
  const double beta = kPi * params.delta / 2.0;
  const double c = std::cos(beta);
  const double as = params.a_star();

  double c1 = detail::c1_const(a, beta);
  double c3_proof = as * gamma_fn(1.0 + 1.0 / a) / (std::pow(2.0, 1.0 / a) * kPi *
                                                    std::pow(c, 1.0 / a));
  double carg = std::cos(std::pow(2.0, 1.0 / a) * beta);
  bool stmt_ok = carg > 0.0;
  double c3_stmt = stmt_ok ? as * gamma_fn(1.0 + 1.0 / a) / (kPi * std::pow(carg, 1.0 / a))
                           : 0.0;
  double c2_stmt = (std::pow(2.0, 1.0 / as) - 1.0) * c3_stmt;
  double c2_proof = (std::pow(2.0, 1.0 / a) - 1.0) * c3_proof;

  detail::MarginAcc m1, m2s, m2p, m3s, m3p;
  CounterRng rng(1234567, 1);
  for (int i = 0; i < samples; ++i) {
    double t = detail::log_uniform(rng, 1e-2, 10.0);
    double h = detail::log_uniform(rng, 1e-3, 40.0);
    m1.le(detail::gx_lhs(a, beta, t, h), c1 * std::pow(h, a - 1.0));

    double s = t * rng.next_uniform();
    double q = t - s;
    double lhs2 = detail::gt1_lhs(a, beta, s, q);
    double rhs_pow = std::pow(q, 1.0 / as);
    if (stmt_ok) m2s.le(lhs2, c2_stmt * rhs_pow);
    m2p.le(lhs2, c2_proof * rhs_pow);
    double lhs3 = detail::gt2_lhs(a, beta, q);
    if (stmt_ok) m3s.le(lhs3, c3_stmt * rhs_pow);
    m3p.le(lhs3, c3_proof * rhs_pow);
  }
  // degenerate cases: x = y and s = t give 0 <= 0
  m1.le(0.0, 0.0);
  m2p.le(detail::gt1_lhs(a, beta, 1.0, 0.0), 0.0);
  m3p.le(detail::gt2_lhs(a, beta, 0.0), 0.0);
  // the C2 proof chain saturates as s -> infinity; stress it
  m2p.le(detail::gt1_lhs(a, beta, 500.0, 0.3), c2_proof * std::pow(0.3, 1.0 / as));

  std::vector<CheckResult> out;
  out.push_back(m1.done("prop-g-c1"));
  out.push_back(m2p.done("prop-g-c2-proof", 2e-5));
  out.push_back(m3p.done("prop-g-c3-proof", 2e-5));
  auto r2 = m2s.done("prop-g-c2-statement");
  auto r3 = m3s.done("prop-g-c3-statement");
  if (!stmt_ok) r2.pass = r3.pass = false;
  out.push_back(r2);
  out.push_back(r3);
  return out;
}

/// Time-increment integral: quadrature LHS vs a*(2^{1/a}-1)(t-s)^{1/a*}, plus the
/// sup of the proof's g on [0,1].
inline std::vector<CheckResult> check_time_incr(double a, int samples) {
  if (!(a > 1.0 && a <= 2.0)) throw domain_error("check_time_incr requires a in ]1,2]");
  double as = a / (a - 1.0);
  auto lhs_quad = [&](double s, double t) {
    if (s <= 0.0) return 0.0;
    // r = s - q^{a*} removes the (s-r)^{-1/a} endpoint singularity
    double top = std::pow(s, 1.0 / as);
    return gl_panels(
        [&](double qq) {
          double v = std::pow(qq, as);
          double jac = as * std::pow(qq, as - 1.0);
          double mid = (t + s) / 2.0 - s + v;
          return jac * (std::pow(t - s + v, -1.0 / a) - 2.0 * std::pow(mid, -1.0 / a)) + as;
        },
        0.0, top, 64, 8);
  };
  auto lhs_closed = [&](double s, double t) {
    double q = t - s;
    return as * (std::pow(s, 1.0 / as) + std::pow(t, 1.0 / as) - std::pow(q, 1.0 / as) +
                 std::pow(2.0, 1.0 / a) * (std::pow(q, 1.0 / as) - std::pow(t + s, 1.0 / as)));
  };
  detail::MarginAcc ineq;
  CounterRng rng(1234567, 2);
  for (int i = 0; i < samples; ++i) {
    double t = detail::log_uniform(rng, 1e-2, 10.0);
    double s = t * rng.next_uniform();
    double lq = lhs_quad(s, t);
    double lc = lhs_closed(s, t);
    if (std::fabs(lq - lc) > 1e-7 * std::max(1.0, std::fabs(lc)))
      throw accuracy_error("check_time_incr: quadrature vs closed form", std::fabs(lq - lc));
    ineq.le(lq, as * (std::pow(2.0, 1.0 / a) - 1.0) * std::pow(t - s, 1.0 / as));
  }
  ineq.le(lhs_quad(0.0, 1.0), 0.0);            // s = 0
  ineq.le(lhs_closed(1.0, 1.0), 0.0);          // s = t, both sides vanish

  double lim = std::pow(2.0, 1.0 / a) - 1.0;
  double sup = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    double r = 1e-5 * k * (1.0 - 1e-9);
    double num = std::pow(r, 1.0 / as) + 1.0 - std::pow(1.0 - r, 1.0 / as) +
                 std::pow(2.0, 1.0 / a) *
                     (std::pow(1.0 - r, 1.0 / as) - std::pow(1.0 + r, 1.0 / as));
    sup = std::max(sup, num / std::pow(1.0 - r, 1.0 / as));
  }
  detail::MarginAcc supm;
  supm.le(sup, lim);
  supm.ge(sup, lim - 1e-3);  // scan approaches the limit from below
  std::vector<CheckResult> out;
  out.push_back(ineq.done("time-incr"));
  out.push_back(supm.done("time-incr-sup-g"));
  return out;
}

/// Exponential lower bound on the transform of (b^2+x^2)^{-nu-1/2}.
inline CheckResult check_fourier_lower(double nu, int samples) {
  if (!(nu >= 0.5)) throw domain_error("check_fourier_lower requires nu >= 1/2");
  double cnu = c_nu_const(nu);
  auto lhs = [&](double b, double bz) {
    const double U = 2000.0;
    double body;
    if (bz < 1e-12) {
      body = gl_panels([&](double u) { return std::pow(1.0 + u * u, -nu - 0.5); }, 0.0, U,
                       512, 8) +
             std::pow(U, -2.0 * nu) / (2.0 * nu);
    } else {
      int panels = std::max(64, static_cast<int>(4.0 * std::ceil(U * bz / (2.0 * kPi))));
      body = gl_panels(
                 [&](double u) { return std::cos(bz * u) * std::pow(1.0 + u * u, -nu - 0.5); },
                 0.0, U, panels, 8) +
             detail::cos_tail(U, bz, 2.0 * nu + 1.0) -
             (nu + 0.5) * detail::cos_tail(U, bz, 2.0 * nu + 3.0);
    }
    return 2.0 * std::pow(b, -2.0 * nu) * body;
  };
  detail::MarginAcc m;
  CounterRng rng(1234567, 3);
  for (int i = 0; i < samples; ++i) {
    double b = detail::log_uniform(rng, 0.1, 10.0);
    double bz = 20.0 * rng.next_uniform();
    m.ge(lhs(b, bz), cnu * std::pow(b, -2.0 * nu) * std::exp(-bz));
  }
  m.ge(lhs(1.0, 0.0), cnu);     // z = 0
  m.ge(lhs(2.0, 20.0), cnu * std::pow(2.0, -2.0 * nu) * std::exp(-20.0));
  return m.done("fourier-lower");
}

/// The g_1 family: the Poisson-kernel comparison lemmas, the s,t-sandwich,
/// and the J0 lower envelope (delta_0 data, strict regime only).
inline std::vector<CheckResult> check_g1_lemmas(const ModelParams& params, int samples) {
  params.validate_solution();
  const double a = params.a;
  CounterRng rng(1234567, 4);
  auto draw_x = [&](int i) {
    if (i % 5 == 4) {
      double v = std::pow(10.0, 1.0 + 2.0 * rng.next_uniform());
      return rng.next_uniform() < 0.5 ? -v : v;
    }
    return -20.0 + 40.0 * rng.next_uniform();
  };

  detail::MarginAcc mst, mga, mcv, mts;
  for (int i = 0; i < samples; ++i) {
    double t = detail::log_uniform(rng, 1e-2, 10.0);
    double s = t * rng.next_uniform();
    double x = draw_x(i);
    double y = draw_x(i + 1);
    double ta = std::pow(t, 1.0 / a);
    double arg = std::pow(s, 1.0 / a) + std::pow(t - s, 1.0 / a);
    mst.ge(g_a_kernel(1.0, arg, x), 0.5 * std::sqrt(2.0) * g_a_kernel(1.0, ta, x));
    mga.ge(g_a_kernel(a, t, x - y), kPi * ta * g_a_kernel(a, t, std::sqrt(2.0) * x) *
                                        g_a_kernel(a, t, std::sqrt(2.0) * y));
    mts.ge(arg, ta);
    mts.le(arg, std::sqrt(2.0) * ta);
  }
  // stst boundary cases s = 0 and s = t: ratio 1 >= sqrt(2)/2
  mst.ge(1.0, 0.5 * std::sqrt(2.0));

  const double conv_const =
      gamma_fn(a + 1.5) / (std::sqrt(2.0) * std::pow(kPi, 1.5) * gamma_fn(2.0 + a));
  int conv_samples = std::min(samples, 30);
  for (int i = 0; i < conv_samples; ++i) {
    double t = detail::log_uniform(rng, 1e-1, 10.0);
    double s = t * (0.05 + 0.9 * rng.next_uniform());
    double x = -20.0 + 40.0 * rng.next_uniform();
    double q = t - s;
    double sa = std::pow(s, 1.0 / a);
    double L = std::fabs(x) + 30.0 * (std::pow(q, 1.0 / a) + sa + std::pow(t, 1.0 / a));
    double rhs = conv_const * std::pow(s, 3.0 / a) * q * q *
                 std::pow(t, -2.0 * (1.0 + 2.0 / a)) *
                 g_a_kernel(1.0, std::pow(t, 1.0 / a), std::sqrt(2.0) * x);
    // panel grid refined geometrically around both bumps (y = x and y = 0)
    std::vector<double> bp = {-L, L};
    for (double c0 : {x, 0.0}) {
      double w = (c0 == 0.0) ? sa : std::pow(q, 1.0 / a) / std::sqrt(2.0);
      w = std::max(w, 1e-8);
      bp.push_back(c0);
      for (int k = -12; k <= 16; ++k) {
        double d = w * std::pow(10.0, 0.5 * k);
        if (c0 + d < L) bp.push_back(c0 + d);
        if (c0 - d > -L) bp.push_back(c0 - d);
      }
    }
    std::sort(bp.begin(), bp.end());
    double lhs = 0.0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      if (bp[k + 1] - bp[k] < 1e-300) continue;
      lhs += gl_panels(
          [&](double y) {
            double g = g_a_kernel(a, q, std::sqrt(2.0) * (x - y));
            return g * g * g_a_kernel(1.0, sa, y);
          },
          bp[k], bp[k + 1], 1, 12);
    }
    mcv.ge(lhs, rhs);
  }

  std::vector<CheckResult> out;
  out.push_back(mst.done("g1-stst"));
  out.push_back(mga.done("g1-galowb"));
  out.push_back(mcv.done("g1-ga2g1"));
  out.push_back(mts.done("tst-sandwich"));

  if (a < 2.0 && std::fabs(params.delta) < 2.0 - a) {
    detail::MarginAcc mj0;
    auto mu = InitialMeasure::dirac();
    const double eps = 0.1;
    for (int i = 0; i < samples; ++i) {
      double t = detail::log_uniform(rng, eps, 10.0);
      double x = draw_x(i);
      mj0.ge(j0_point(params, mu, t, x), j0_lower_envelope(params, mu, eps, t, x));
    }
    mj0.ge(j0_point(params, mu, eps / 2.0, 0.0), 0.0);  // t < eps: envelope vanishes
    out.push_back(mj0.done("g1-j0lowb"));
  }
  return out;
}

/// Full default suite; deterministic, aggregated by name.
inline std::vector<CheckResult> run_verify_suite(const ModelParams& params,
                                                 int samples = 40) {
  std::vector<CheckResult> out;
  for (auto& r : check_prop_g(params, samples)) out.push_back(std::move(r));
  for (auto& r : check_time_incr(params.a, samples)) out.push_back(std::move(r));
  out.push_back(check_fourier_lower(params.a + 0.5, samples));
  out.push_back(check_fourier_lower(0.5, samples));
  for (auto& r : check_g1_lemmas(params, samples)) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(),
            [](const CheckResult& l, const CheckResult& r) { return l.name < r.name; });
  return out;
}

/// Suite verdict; "-statement" variants are informational (the printed
/// constants are checked but the proof's formulas are the requirement).
inline bool suite_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (r.name.size() >= 10 && r.name.rfind("-statement") == r.name.size() - 10) continue;
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace fsheat
