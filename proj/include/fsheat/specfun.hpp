#pragma once

// Gamma, Beta and two-parameter Mittag-Leffler evaluation.

#include <cmath>
#include <complex>
#include <limits>

#include "fsheat/errors.hpp"

namespace fsheat {

/// Euler Gamma for positive arguments.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw domain_error("gamma_fn requires x > 0");
  return std::tgamma(x);
}

/// sin(pi*y) with exact zeros at integer y.
inline double sin_pi(double y) {
  double n = std::round(y);
  double f = y - n;
  if (f == 0.0) return 0.0;
  double s = std::sin(3.14159265358979323846 * f);
  return (std::fmod(std::fabs(n), 2.0) == 1.0) ? -s : s;
}

/// 1/Gamma(y) on the whole real line; exactly 0 at y = 0, -1, -2, ...
inline double reciprocal_gamma(double y) {
  if (y > 0.5) {
    if (y > 170.0) return std::exp(-std::lgamma(y));
    return 1.0 / std::tgamma(y);
  }
  double s = sin_pi(y);
  if (s == 0.0) return 0.0;
  // reflection: 1/Gamma(y) = sin(pi y) Gamma(1-y) / pi
  double lg = std::lgamma(1.0 - y);
  double mag = std::exp(lg + std::log(std::fabs(s)) - std::log(3.14159265358979323846));
  return s > 0.0 ? mag : -mag;
}

/// Euler Beta integral int_0^t s^{p-1}(t-s)^{q-1} ds = B(p,q) t^{p+q-1}.
inline double beta_integral(double p, double q, double t) {
  if (!(p > 0.0) || !(q > 0.0)) throw domain_error("beta_integral requires p,q > 0");
  if (t < 0.0) throw domain_error("beta_integral requires t >= 0");
  double lb = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
  return std::exp(lb) * std::pow(t, p + q - 1.0);
}

struct MLParams {
  double alpha;
  double beta;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 2.0)) throw domain_error("MLParams: alpha must lie in ]0,2[");
    if (!(beta > 0.0)) throw domain_error("MLParams: beta must be > 0");
  }
};

namespace detail {

/// Power series of E_{alpha,beta}(z), compensated summation.
inline double ml_series(double alpha, double beta, double z) {
  double term = reciprocal_gamma(beta);
  double sum = term;
  double comp = 0.0;
  double lg_prev = std::lgamma(beta);
  for (int k = 1; k <= 500; ++k) {
    double lg_next = std::lgamma(alpha * k + beta);
    term *= z * std::exp(lg_prev - lg_next);
    lg_prev = lg_next;
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::fabs(term) < 1e-16 * std::fabs(sum) && k > 2) break;
  }
  return sum;
}

/// Exponential asymptotics on the positive axis (large z).
inline double ml_asymptotic(double alpha, double beta, double z) {
  double z1a = std::pow(z, 1.0 / alpha);
  double lead = (1.0 / alpha) * std::pow(z, (1.0 - beta) / alpha) * std::exp(z1a);
  double corr = 0.0;
  double zk = 1.0;
  for (int k = 1; k <= 5; ++k) {
    zk *= z;
    corr += reciprocal_gamma(beta - alpha * k) / zk;
  }
  return lead - corr;
}

/// Hankel-contour quadrature on a parabolic contour, for z < 0 and
/// 0 < alpha < 1.  The poles of 1/(s^alpha - z) lie off the principal
/// sheet, so the contour integral equals the series sum.
inline double ml_contour(double alpha, double beta, double z) {
  const double mu = 8.0;
  const double U = 5.0;
  const int N = 1600;
  const double d = 2.0 * U / N;
  const double pi = 3.14159265358979323846;
  double acc = 0.0;
  for (int j = 0; j <= N; ++j) {
    double u = -U + j * d;
    std::complex<double> one_iu(1.0, u);
    std::complex<double> s = mu * one_iu * one_iu;
    std::complex<double> val =
        std::exp(s) * std::pow(s, alpha - beta) / (std::pow(s, alpha) - z) * one_iu;
    double w = (j == 0 || j == N) ? 0.5 : 1.0;
    acc += w * val.real();
  }
  return acc * mu * d / pi;
}

}  // namespace detail

/// E_{alpha,beta}(z) on the real line.
inline double mittag_leffler(const MLParams& ml, double z) {
  ml.validate();
  double alpha = ml.alpha, beta = ml.beta;
  if (z == 0.0) return reciprocal_gamma(beta);
  if (z > 0.0) {
    if (std::pow(z, 1.0 / alpha) > 30.0) return detail::ml_asymptotic(alpha, beta, z);
    return detail::ml_series(alpha, beta, z);
  }
  if (alpha < 0.95) return detail::ml_contour(alpha, beta, z);
  return detail::ml_series(alpha, beta, z);
}

/// int_0^t E_{alpha,beta}(lam s^alpha) s^{beta-1} ds = t^beta E_{alpha,beta+1}(lam t^alpha).
inline double ml_time_integral(const MLParams& ml, double lam, double t) {
  ml.validate();
  if (t < 0.0) throw domain_error("ml_time_integral requires t >= 0");
  if (t == 0.0) return 0.0;
  MLParams shifted{ml.alpha, ml.beta + 1.0};
  return std::pow(t, ml.beta) * mittag_leffler(shifted, lam * std::pow(t, ml.alpha));
}

}  // namespace fsheat
