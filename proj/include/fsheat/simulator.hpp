#pragma once

// Monte Carlo simulation of the mild equation by kernel stepping:
//   u_{k+1}(x) = sum_y dx G(dt, x-y) u_k(y) + sum_y G(dt, x-y) rho(u_k(y)) dW_{k,y},
// dW ~ N(0, dt dx).  The deterministic part J0 is carried analytically and
// only the noise-driven remainder v = u - J0 is stepped on the lattice, so
// measure-valued initial data needs no lattice mollification.  The window is
// padded so that the boundary influence over the full horizon stays below
// boundary_tol; convolutions are linear (zero-padded FFT), never periodic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/fft.hpp"
#include "fsheat/grid.hpp"
#include "fsheat/measure.hpp"
#include "fsheat/model.hpp"
#include "fsheat/moments.hpp"
#include "fsheat/rng.hpp"
#include "fsheat/stable_green.hpp"

namespace fsheat {

enum class RhoKind { linear, near_linear, custom };

/// Noise coefficient rho.  linear: lam u.  near_linear: lam sqrt(off^2+u^2).
/// custom: piecewise-linear table with declared growth constants.
struct RhoSpec {
  RhoKind kind = RhoKind::linear;
  double lam = 1.0;
  double offset = 0.0;                    // near_linear shift
  std::vector<double> table_u, table_rho;  // custom samples, table_u increasing
  double lip_declared = 0.0;
  double lip_lower_declared = 0.0;

  void validate() const {
    if (!std::isfinite(lam) || lam < 0.0) throw domain_error("rho: lam must be >= 0");
    if (kind == RhoKind::near_linear && !std::isfinite(offset))
      throw domain_error("rho: non-finite offset");
    if (kind == RhoKind::custom) {
      if (table_u.size() < 2 || table_u.size() != table_rho.size())
        throw domain_error("rho: custom table needs matching samples, >= 2");
      for (std::size_t i = 1; i < table_u.size(); ++i)
        if (!(table_u[i] > table_u[i - 1]))
          throw domain_error("rho: custom table_u must be strictly increasing");
      if (!(lip_declared > 0.0))
        throw domain_error("rho: custom table requires a declared Lipschitz constant");
    }
  }

  double eval(double u) const {
    switch (kind) {
      case RhoKind::linear:
        return lam * u;
      case RhoKind::near_linear:
        return lam * std::sqrt(offset * offset + u * u);
      case RhoKind::custom: {
        if (u <= table_u.front()) {
          double sl = (table_rho[1] - table_rho[0]) / (table_u[1] - table_u[0]);
          return table_rho.front() + sl * (u - table_u.front());
        }
        if (u >= table_u.back()) {
          std::size_t n = table_u.size();
          double sl = (table_rho[n - 1] - table_rho[n - 2]) / (table_u[n - 1] - table_u[n - 2]);
          return table_rho.back() + sl * (u - table_u.back());
        }
        auto it = std::upper_bound(table_u.begin(), table_u.end(), u);
        std::size_t j = static_cast<std::size_t>(it - table_u.begin()) - 1;
        double f = (u - table_u[j]) / (table_u[j + 1] - table_u[j]);
        return table_rho[j] + f * (table_rho[j + 1] - table_rho[j]);
      }
    }
    return 0.0;
  }

  double lip() const { return kind == RhoKind::custom ? lip_declared : lam; }
  double lip_low() const { return kind == RhoKind::custom ? lip_lower_declared : lam; }
};

struct SimConfig {
  GridSpec grid;
  int n_paths = 2;
  std::uint64_t master_seed = 0;
  RhoSpec rho;
  int substeps = 1;                 // internal time refinement between slices
  std::vector<int> p_values = {2};  // moments to accumulate
  double boundary_tol = 1e-4;       // admissible boundary influence
};

struct EmpiricalMoments {
  std::vector<int> p_values;
  std::vector<ScalarField> moment_fields;  // E|u|^p estimates
  std::vector<ScalarField> stderr_fields;  // per-cell standard errors
  int n_paths = 0;
  std::uint64_t master_seed = 0;
};

namespace detail {

/// Smallest |z| with int_{|u|>z} G(1,u)^2 du <= tol int G(1,u)^2 du.
inline double g2_tail_z(const GreenProfile& prof, double tol) {
  const auto& s = prof.samples();
  double h = prof.grid_step();
  double budget = tol * prof.integral_sq();
  std::size_t n = s.size();
  double acc = 0.0;
  for (std::size_t j = 0; 2 * j < n; ++j) {
    acc += h * (s[j] * s[j] + s[n - 1 - j] * s[n - 1 - j]);
    if (acc > budget) return std::max(1.0, std::fabs(prof.sample_x(static_cast<int>(j))));
  }
  return 1.0;
}

inline void check_rho_consistency(const ModelParams& params, const RhoSpec& rho) {
  rho.validate();
  if (rho.lip() > params.lip_upper * (1.0 + 1e-9))
    throw domain_error("rho growth exceeds ModelParams Lip_rho");
  double l = rho.lip_low();
  if (l > 0.0 && l < params.lip_lower * (1.0 - 1e-9))
    throw domain_error("rho lower growth below ModelParams l_rho");
}

}  // namespace detail

/// Simulate n_paths independent solutions and reduce them into empirical
/// moment fields.  Results are a pure function of (params, mu, cfg): path
/// substreams are counter-based and the reduction runs over fixed blocks in
/// index order, so any n_threads gives bit-identical output.
inline EmpiricalMoments simulate(const ModelParams& params, const InitialMeasure& mu,
                                 const SimConfig& cfg, int n_threads = 1) {
  params.validate_solution();
  mu.validate();
  cfg.grid.validate();
  if (cfg.n_paths < 2) throw domain_error("simulate: n_paths must be >= 2");
  if (cfg.substeps < 1) throw domain_error("simulate: substeps must be >= 1");
  if (cfg.p_values.empty()) throw domain_error("simulate: no moments requested");
  for (int p : cfg.p_values)
    if (p < 2 || p % 2 != 0) throw domain_error("simulate: moment orders must be even, >= 2");
  if (!(cfg.boundary_tol > 0.0)) throw domain_error("simulate: boundary_tol must be > 0");
  detail::check_rho_consistency(params, cfg.rho);
  if (n_threads < 1) n_threads = 1;

  const GridSpec& grid = cfg.grid;
  const int nx = grid.nx, nt = grid.nt;
  const double dx = grid.dx();
  const double dt = grid.dt() / cfg.substeps;
  const int nsteps = (nt - 1) * cfg.substeps;
  auto prof = green_profile(params);

  // pad so that noise generated anywhere in the window keeps its G^2-weighted
  // influence on the interior above 1 - boundary_tol over the full horizon
  double zstar = detail::g2_tail_z(*prof, cfg.boundary_tol);
  double pad = zstar * std::pow(grid.t_max, 1.0 / params.a);
  int npad = std::max(8, static_cast<int>(std::ceil(pad / dx)));
  const int nxe = nx + 2 * npad;
  auto xe = [&](int i) { return -grid.x_half_width + (i - npad) * dx; };

  // analytic deterministic part on the (step, extended-x) lattice
  std::vector<std::vector<double>> j0(nsteps + 1, std::vector<double>(nxe));
  for (int k = 0; k <= nsteps; ++k) {
    double tk = grid.t_min + k * dt;
    for (int i = 0; i < nxe; ++i) j0[k][i] = j0_point(params, mu, tk, xe(i));
  }

  // one-step Green row and its spectrum (zero-padded linear convolution)
  const int nrow = 2 * nxe - 1;
  const double sdt = std::pow(dt, -1.0 / params.a);
  std::vector<double> row(nrow);
  for (int j = 0; j < nrow; ++j) row[j] = sdt * prof->value((j - (nxe - 1)) * dx * sdt);
  const std::size_t np2 = next_pow2(static_cast<std::size_t>(nxe + nrow - 1));
  Fft fft(np2);
  std::vector<std::complex<double>> ghat(np2);
  for (int j = 0; j < nrow; ++j) ghat[j] = row[j];
  fft.forward(ghat.data());

  const double noise_sd = std::sqrt(dt * dx);
  const double blow_up = 1e12;
  const int kBlock = 256;
  const int nblocks = (cfg.n_paths + kBlock - 1) / kBlock;
  const std::size_t cells = static_cast<std::size_t>(nt) * nx;
  const std::size_t nmom = cfg.p_values.size();

  struct BlockAcc {
    std::vector<double> sum, sumsq;  // nmom * cells each
    double bad_t = 0.0, bad_x = 0.0;
    bool blown = false;
  };
  std::vector<BlockAcc> blocks(nblocks);

  auto record = [&](BlockAcc& acc, const std::vector<double>& v, int slice, int k) {
    for (int i = 0; i < nx; ++i) {
      double u = j0[k][i + npad] + v[i + npad];
      std::size_t cell = static_cast<std::size_t>(slice) * nx + i;
      double au = std::fabs(u);
      for (std::size_t m = 0; m < nmom; ++m) {
        double up = std::pow(au, cfg.p_values[m]);
        acc.sum[m * cells + cell] += up;
        acc.sumsq[m * cells + cell] += up * up;
      }
    }
  };

  auto run_block = [&](int b) {
    BlockAcc& acc = blocks[b];
    acc.sum.assign(nmom * cells, 0.0);
    acc.sumsq.assign(nmom * cells, 0.0);
    int lo = b * kBlock, hi = std::min(cfg.n_paths, lo + kBlock);
    std::vector<double> va(nxe), vb(nxe), sa(nxe), sb(nxe);
    std::vector<std::complex<double>> work(np2);
    for (int pa = lo; pa < hi && !acc.blown; pa += 2) {
      int pb = pa + 1;
      bool have_b = pb < hi;
      std::fill(va.begin(), va.end(), 0.0);
      std::fill(vb.begin(), vb.end(), 0.0);
      CounterRng rng_a(cfg.master_seed, static_cast<std::uint64_t>(pa));
      CounterRng rng_b(cfg.master_seed, static_cast<std::uint64_t>(pb));
      record(acc, va, 0, 0);
      if (have_b) record(acc, vb, 0, 0);
      for (int k = 0; k < nsteps; ++k) {
        for (int i = 0; i < nxe; ++i) {
          sa[i] = dx * va[i] +
                  cfg.rho.eval(j0[k][i] + va[i]) * noise_sd * rng_a.next_normal();
          sb[i] = have_b ? dx * vb[i] + cfg.rho.eval(j0[k][i] + vb[i]) * noise_sd *
                                            rng_b.next_normal()
                         : 0.0;
        }
        // two real convolutions per complex FFT: conv is linear in the input
        // and the row is real, so Re/Im separate after the inverse transform
        std::fill(work.begin(), work.end(), std::complex<double>(0.0, 0.0));
        for (int i = 0; i < nxe; ++i) work[i] = {sa[i], sb[i]};
        fft.forward(work.data());
        for (std::size_t i = 0; i < np2; ++i) work[i] *= ghat[i];
        fft.inverse(work.data());
        for (int i = 0; i < nxe; ++i) {
          va[i] = work[i + nxe - 1].real();
          vb[i] = work[i + nxe - 1].imag();
        }
        double tk1 = grid.t_min + (k + 1) * dt;
        for (int i = 0; i < nxe; ++i) {
          double ua = j0[k + 1][i] + va[i];
          double ub = have_b ? j0[k + 1][i] + vb[i] : 0.0;
          if (!std::isfinite(ua) || std::fabs(ua) > blow_up || !std::isfinite(ub) ||
              std::fabs(ub) > blow_up) {
            acc.blown = true;
            acc.bad_t = tk1;
            acc.bad_x = xe(i);
            break;
          }
        }
        if (acc.blown) break;
        if ((k + 1) % cfg.substeps == 0) {
          int slice = (k + 1) / cfg.substeps;
          record(acc, va, slice, k + 1);
          if (have_b) record(acc, vb, slice, k + 1);
        }
      }
    }
  };

  if (n_threads == 1 || nblocks == 1) {
    for (int b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    int nth = std::min(n_threads, nblocks);
    for (int w = 0; w < nth; ++w)
      pool.emplace_back([&, w]() {
        for (int b = w; b < nblocks; b += nth) run_block(b);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& acc : blocks)
    if (acc.blown)
      throw stability_error("simulate: field exceeded the stability threshold", acc.bad_t,
                            acc.bad_x);

  EmpiricalMoments em;
  em.p_values = cfg.p_values;
  em.n_paths = cfg.n_paths;
  em.master_seed = cfg.master_seed;
  double inv_n = 1.0 / cfg.n_paths;
  for (std::size_t m = 0; m < nmom; ++m) {
    ScalarField mean, err;
    mean.grid = grid;
    err.grid = grid;
    mean.values.assign(cells, 0.0);
    err.values.assign(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
      double s1 = 0.0, s2 = 0.0;
      for (const auto& acc : blocks) {
        s1 += acc.sum[m * cells + c];
        s2 += acc.sumsq[m * cells + c];
      }
      double mu1 = s1 * inv_n;
      double var = std::max(0.0, s2 * inv_n - mu1 * mu1);
      mean.values[c] = mu1;
      err.values[c] = std::sqrt(var * inv_n);
    }
    em.moment_fields.push_back(std::move(mean));
    em.stderr_fields.push_back(std::move(err));
  }
  return em;
}

struct LyapunovBand {
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};

/// Least-squares slope of log E|u|^p(t, x_probe) over the last half of the
/// time window, with a 2-sigma band from the fit residuals.
inline LyapunovBand lyapunov_estimate(const EmpiricalMoments& em, double x_probe, int p) {
  std::size_t m = 0;
  for (; m < em.p_values.size(); ++m)
    if (em.p_values[m] == p) break;
  if (m == em.p_values.size()) throw domain_error("lyapunov_estimate: order p not simulated");
  const ScalarField& f = em.moment_fields[m];
  const GridSpec& grid = f.grid;
  if (!(grid.t_max >= 5.0 * grid.t_min))
    throw domain_error("lyapunov_estimate: time window too short (need t_max/t_min >= 5)");
  int j = 0;
  double best = std::fabs(grid.x(0) - x_probe);
  for (int i = 1; i < grid.nx; ++i) {
    double d = std::fabs(grid.x(i) - x_probe);
    if (d < best) {
      best = d;
      j = i;
    }
  }
  int i0 = grid.nt / 2;
  int n = grid.nt - i0;
  if (n < 3) throw domain_error("lyapunov_estimate: too few time slices");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::vector<double> ts(n), ys(n);
  for (int i = 0; i < n; ++i) {
    double v = f.at(i0 + i, j);
    if (!(v > 0.0))
      throw accuracy_error("lyapunov_estimate: non-positive moment at the probe", v);
    ts[i] = grid.t(i0 + i);
    ys[i] = std::log(v);
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  double den = n * stt - st * st;
  double slope = (n * sty - st * sy) / den;
  double icpt = (sy - slope * st) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = ys[i] - slope * ts[i] - icpt;
    ss += r * r;
  }
  double se = (n > 2) ? std::sqrt(ss / (n - 2) / (stt - st * st / n)) : 0.0;
  return {slope - 2.0 * se, slope + 2.0 * se};
}

}  // namespace fsheat
