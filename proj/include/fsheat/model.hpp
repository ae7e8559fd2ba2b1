#pragma once

// Model constants of the fractional stochastic heat equation
// (d/dt - xD_delta^a) u = rho(u) Wdot.

#include <cmath>

#include "fsheat/errors.hpp"

namespace fsheat {

struct ModelParams {
  double a = 2.0;          // stability order
  double delta = 0.0;      // skewness, |delta| <= 2-a
  double lambda = 1.0;     // noise coupling used for the kernel K
  double lip_upper = 1.0;  // Lip_rho
  double vip_upper = 0.0;  // Vbar
  double lip_lower = 1.0;  // l_rho
  double vip_lower = 0.0;  // vbar (lower growth)

  double a_star() const { return a / (a - 1.0); }
  double b() const { return 2.0 - 2.0 / a; }

  /// Loose validation: density evaluation allows a in ]0,2].
  void validate_density() const {
    if (!(a > 0.0 && a <= 2.0)) throw domain_error("ModelParams: a must lie in ]0,2]");
    if (!(std::fabs(delta) <= 2.0 - a + 1e-15))
      throw domain_error("ModelParams: |delta| must be <= 2-a");
  }

  /// Solution theory requires a in ]1,2].
  void validate_solution() const {
    validate_density();
    if (!(a > 1.0)) throw domain_error("ModelParams: solution theory requires a > 1");
  }

  /// Strict regime of the lower bounds: a in ]1,2[, |delta| < 2-a.
  void validate_strict() const {
    validate_solution();
    if (!(a < 2.0) || !(std::fabs(delta) < 2.0 - a))
      throw domain_error("ModelParams: strict regime requires a in ]1,2[ and |delta| < 2-a");
  }
};

}  // namespace fsheat
