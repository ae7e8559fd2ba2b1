#pragma once

// Admissible initial data mu in M_a(R): a list of atoms plus an optional
// sampled density on a declared window, continued beyond the window by a
// tail model (none, constant level, or power |x|^{-eta}).

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/model.hpp"
#include "fsheat/quadrature.hpp"
#include "fsheat/stable_green.hpp"

namespace fsheat {

enum class TailModel { none, constant, power };

struct InitialMeasure {
  struct Atom {
    double location = 0.0;
    double mass = 1.0;
  };
  std::vector<Atom> atoms;

  bool has_density = false;
  double support_lo = -1.0;
  double support_hi = 1.0;
  std::vector<double> density;  // samples at uniform nodes over [lo,hi], size >= 2
  TailModel tail = TailModel::none;
  double tail_level = 0.0;  // level beyond the window / coefficient of |x|^{-eta}
  double tail_eta = 0.0;

  static InitialMeasure dirac(double mass = 1.0, double location = 0.0) {
    InitialMeasure mu;
    mu.atoms.push_back({location, mass});
    return mu;
  }

  static InitialMeasure lebesgue(double level = 1.0) {
    InitialMeasure mu;
    mu.has_density = true;
    mu.support_lo = -1.0;
    mu.support_hi = 1.0;
    mu.density = {level, level};
    mu.tail = TailModel::constant;
    mu.tail_level = level;
    return mu;
  }

  void validate() const {
    if (has_density) {
      if (!(support_hi > support_lo)) throw domain_error("measure: empty density window");
      if (density.size() < 2) throw domain_error("measure: density needs >= 2 samples");
      for (double v : density)
        if (!std::isfinite(v)) throw domain_error("measure: non-finite density sample");
    }
    for (const Atom& at : atoms)
      if (!std::isfinite(at.location) || !std::isfinite(at.mass))
        throw domain_error("measure: non-finite atom");
    if (tail == TailModel::power && !(tail_eta > 0.0))
      throw domain_error("measure: power tail requires eta > 0");
    if (tail != TailModel::none && !std::isfinite(tail_level))
      throw domain_error("measure: non-finite tail level");
  }

  bool is_zero() const {
    for (const Atom& at : atoms)
      if (at.mass != 0.0) return false;
    if (has_density) {
      for (double v : density)
        if (v != 0.0) return false;
    }
    return tail == TailModel::none || tail_level == 0.0;
  }

  bool nonneg() const {
    for (const Atom& at : atoms)
      if (at.mass < 0.0) return false;
    if (has_density) {
      for (double v : density)
        if (v < 0.0) return false;
    }
    if (tail != TailModel::none && tail_level < 0.0) return false;
    return true;
  }

  /// Density is a single constant over the whole line.
  bool is_uniform_density() const {
    if (!has_density || tail != TailModel::constant) return false;
    for (double v : density)
      if (v != tail_level) return false;
    return true;
  }

  /// Density value at x (0 if no density part); the tail model applies
  /// outside the sampled window.
  double density_value(double x) const {
    if (!has_density) {
      if (tail == TailModel::none) return 0.0;
      // tail without a window: treat the window as empty support
    }
    if (has_density && x >= support_lo && x <= support_hi) {
      double h = (support_hi - support_lo) / (static_cast<double>(density.size()) - 1.0);
      double y = (x - support_lo) / h;
      std::size_t j = static_cast<std::size_t>(y);
      if (j + 1 >= density.size()) return density.back();
      double f = y - static_cast<double>(j);
      return density[j] + f * (density[j + 1] - density[j]);
    }
    switch (tail) {
      case TailModel::none:
        return 0.0;
      case TailModel::constant:
        return tail_level;
      case TailModel::power: {
        double ax = std::fabs(x);
        if (ax < 1e-8) ax = 1e-8;
        return tail_level * std::pow(ax, -tail_eta);
      }
    }
    return 0.0;
  }
};

/// A_a = sup_y int |mu|(dx)/(1+|x-y|^{1+a})  (Eq. for admissibility),
/// evaluated numerically on a y-scan covering the atoms and the window.
inline double a_a_const(const ModelParams& params, const InitialMeasure& mu) {
  params.validate_density();
  mu.validate();
  double ex = 1.0 + params.a;
  auto integral_at = [&](double yy) {
    double acc = 0.0;
    for (const auto& at : mu.atoms)
      acc += std::fabs(at.mass) / (1.0 + std::pow(std::fabs(at.location - yy), ex));
    if (mu.has_density || mu.tail != TailModel::none) {
      const double r = 64.0;
      acc += gl_panels(
          [&](double u) {
            return std::fabs(mu.density_value(yy + u)) / (1.0 + std::pow(std::fabs(u), ex));
          },
          -r, r, 64, 8);
      // tail remainder: density beyond |u| > r against the |u|^{-1-a} decay
      acc += (std::fabs(mu.density_value(yy + r + 1.0)) +
              std::fabs(mu.density_value(yy - r - 1.0))) *
             std::pow(r, -params.a) / params.a;
    }
    return acc;
  };
  double sup = 0.0;
  auto consider = [&](double yy) {
    double v = integral_at(yy);
    if (v > sup) sup = v;
  };
  consider(0.0);
  for (const auto& at : mu.atoms) consider(at.location);
  if (mu.has_density) {
    consider(0.5 * (mu.support_lo + mu.support_hi));
    consider(mu.support_lo);
    consider(mu.support_hi);
  }
  for (int k = -40; k <= 40; ++k) consider(k * 1.0);
  return sup;
}

/// Admissibility check: valid representation with a finite A_a.
inline bool admissible(const ModelParams& params, const InitialMeasure& mu) {
  try {
    return std::isfinite(a_a_const(params, mu));
  } catch (const domain_error&) {
    return false;
  }
}

/// int |mu|(dy)(1+|y|^eta); +infinity when the tail model diverges.
inline double eta_moment(const InitialMeasure& mu, double eta) {
  if (!(eta > 0.0)) throw domain_error("eta_moment requires eta > 0");
  mu.validate();
  double acc = 0.0;
  for (const auto& at : mu.atoms)
    acc += std::fabs(at.mass) * (1.0 + std::pow(std::fabs(at.location), eta));
  if (mu.has_density) {
    acc += gl_panels(
        [&](double x) {
          return std::fabs(mu.density_value(x)) * (1.0 + std::pow(std::fabs(x), eta));
        },
        mu.support_lo, mu.support_hi, 32, 8);
  }
  if (mu.tail == TailModel::constant && mu.tail_level != 0.0)
    return std::numeric_limits<double>::infinity();
  if (mu.tail == TailModel::power && mu.tail_level != 0.0) {
    if (!(mu.tail_eta > eta + 1.0)) return std::numeric_limits<double>::infinity();
    double x0 = std::max({1.0, std::fabs(mu.support_lo), std::fabs(mu.support_hi)});
    // 2 int_{x0}^inf c x^{eta - tail_eta} (1 + o(1)) dx, using 1+x^eta <= 2x^eta
    acc += 4.0 * std::fabs(mu.tail_level) * std::pow(x0, eta - mu.tail_eta + 1.0) /
           (mu.tail_eta - eta - 1.0);
  }
  return acc;
}

/// int mu(dy) g_a(eps, sqrt(2) y) by atom sums plus window/tail quadrature.
inline double measure_ga_integral(const ModelParams& params, const InitialMeasure& mu,
                                  double eps) {
  double acc = 0.0;
  for (const auto& at : mu.atoms)
    acc += at.mass * g_a_kernel(params.a, eps, std::sqrt(2.0) * at.location);
  if (mu.has_density || mu.tail != TailModel::none) {
    const double r = 64.0;
    acc += gl_panels(
        [&](double y) {
          return mu.density_value(y) * g_a_kernel(params.a, eps, std::sqrt(2.0) * y);
        },
        -r, r, 128, 8);
  }
  return acc;
}

/// Constant of the lower envelope J0 >= C 1_{t>=eps} g_a(t, sqrt2 x):
/// C = c_tilde pi^2 eps^{1/a} int mu(dy) g_a(eps, sqrt2 y).
inline double j0_lower_constant(const ModelParams& params, const InitialMeasure& mu,
                                double eps) {
  params.validate_strict();
  if (!(eps > 0.0)) throw domain_error("j0_lower_constant requires eps > 0");
  if (!mu.nonneg()) throw domain_error("j0_lower_constant requires a nonnegative measure");
  return c_tilde(params) * kPi * kPi * std::pow(eps, 1.0 / params.a) *
         measure_ga_integral(params, mu, eps);
}

}  // namespace fsheat
