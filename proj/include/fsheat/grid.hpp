#pragma once

// Uniform space-time lattice and real fields over it.

#include <cmath>
#include <cstddef>
#include <vector>

#include "fsheat/errors.hpp"

namespace fsheat {

struct QuadratureSpec {
  double xi_max = 0.0;  // 0 = automatic cutoff
  int n_xi = 0;         // 0 = automatic node count
};

struct GridSpec {
  double t_min = 0.1;
  double t_max = 1.0;
  int nt = 16;
  double x_half_width = 10.0;
  int nx = 129;
  QuadratureSpec quadrature;

  void validate() const {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw domain_error("GridSpec: need 0 < t_min < t_max");
    if (nt < 2) throw domain_error("GridSpec: nt >= 2");
    if (!(x_half_width > 0.0)) throw domain_error("GridSpec: x_half_width > 0");
    if (nx < 3 || nx % 2 == 0) throw domain_error("GridSpec: nx must be odd and >= 3");
  }

  double dt() const { return (t_max - t_min) / (nt - 1); }
  double dx() const { return 2.0 * x_half_width / (nx - 1); }
  double t(int i) const { return t_min + i * dt(); }
  double x(int j) const { return -x_half_width + j * dx(); }
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;  // nt*nx, row-major in time

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), values(std::size_t(g.nt) * g.nx, 0.0) {}

  double& at(int it, int jx) { return values[std::size_t(it) * grid.nx + jx]; }
  double at(int it, int jx) const { return values[std::size_t(it) * grid.nx + jx]; }
  const double* row(int it) const { return values.data() + std::size_t(it) * grid.nx; }
  double* row(int it) { return values.data() + std::size_t(it) * grid.nx; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace fsheat
