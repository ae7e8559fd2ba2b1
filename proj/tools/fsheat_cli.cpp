// Command-line front end: runs the library pipelines from a key = value
// config file and emits CSV artifacts.
//
// usage: fsheat <green|kernel|moments|simulate|growth|verify|all>
//               --config <path> [--set k=v]... [--out <dir>] [--seed <u64>] [--quiet]
//
// exit codes: 0 success, 1 domain/config error, 2 accuracy/stability error,
//             3 verification-suite failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "fsheat/config.hpp"
#include "fsheat/csv.hpp"
#include "fsheat/growth.hpp"
#include "fsheat/kernel.hpp"
#include "fsheat/moments.hpp"
#include "fsheat/simulator.hpp"
#include "fsheat/stable_green.hpp"
#include "fsheat/verify.hpp"

namespace {

using namespace fsheat;

struct Options {
  std::string subcommand;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string out_dir;  // --out beats outputs.out_dir
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool quiet = false;
};

void usage(std::ostream& os) {
  os << "usage: fsheat <green|kernel|moments|simulate|growth|verify|all>"
     << " --config <path> [--set k=v]... [--out <dir>] [--seed <u64>] [--quiet]\n";
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.outputs.out_dir) / name).string();
}

void summary(const Options& opt, const CsvWriter& w, const std::string& what) {
  if (!opt.quiet)
    std::cout << "wrote " << w.path() << " (" << w.rows() - 1 << " rows): " << what << "\n";
}

void run_green(const RunConfig& cfg, const Options& opt) {
  ScalarField f = green_field(cfg.model, cfg.grid);
  CsvWriter w(out_path(cfg, "green.csv"), cfg.outputs.precision);
  w.row({"t", "x", "value"});
  for (int i = 0; i < cfg.grid.nt; ++i)
    for (int j = 0; j < cfg.grid.nx; ++j)
      w.row({w.num(cfg.grid.t(i)), w.num(cfg.grid.x(j)), w.num(f.at(i, j))});
  summary(opt, w, "Green function G(t,x)");
}

void run_kernel(const RunConfig& cfg, const Options& opt) {
  KernelEstimate est = kernel_series(cfg.model, cfg.grid, cfg.model.lambda, cfg.kernel_tol);
  {
    CsvWriter w(out_path(cfg, "kernel.csv"), cfg.outputs.precision);
    w.row({"t", "x", "value"});
    for (int i = 0; i < cfg.grid.nt; ++i)
      for (int j = 0; j < cfg.grid.nx; ++j)
        w.row({w.num(cfg.grid.t(i)), w.num(cfg.grid.x(j)), w.num(est.field.at(i, j))});
    summary(opt, w, "kernel K truncated at N=" + std::to_string(est.trunc_index));
  }
  bool strict = cfg.model.a < 2.0 && std::fabs(cfg.model.delta) < 2.0 - cfg.model.a;
  CsvWriter w(out_path(cfg, "kernel_bounds.csv"), cfg.outputs.precision);
  w.row({"t", "x", "lower", "upper"});
  for (int i = 0; i < cfg.grid.nt; ++i) {
    double t = cfg.grid.t(i);
    for (int j = 0; j < cfg.grid.nx; ++j) {
      double x = cfg.grid.x(j);
      double lo =
          strict ? kernel_lower_bound(cfg.model, t, x, cfg.model.lambda) : 0.0;
      double up = kernel_upper_bound(cfg.model, t, x, cfg.model.lambda) +
                  est.tail_bound_field[i];
      w.row({w.num(t), w.num(x), w.num(lo), w.num(up)});
    }
  }
  summary(opt, w, "kernel sandwich bounds");
}

void run_moments(const RunConfig& cfg, const Options& opt) {
  InitialMeasure mu = cfg.measure.build();
  ScalarField sec = second_moment_exact(cfg.model, mu, cfg.grid, cfg.moments_vv);
  ScalarField low = second_moment_lower(cfg.model, mu, cfg.grid);
  ScalarField up = pth_moment_upper(cfg.model, mu, cfg.grid, 2);
  {
    CsvWriter w(out_path(cfg, "moments.csv"), cfg.outputs.precision);
    w.row({"t", "x", "j0", "second_moment", "second_lower", "second_upper"});
    for (int i = 0; i < cfg.grid.nt; ++i) {
      double t = cfg.grid.t(i);
      for (int j = 0; j < cfg.grid.nx; ++j) {
        double x = cfg.grid.x(j);
        w.row({w.num(t), w.num(x), w.num(j0_point(cfg.model, mu, t, x)),
               w.num(sec.at(i, j)), w.num(low.at(i, j)), w.num(up.at(i, j))});
      }
    }
    summary(opt, w, "moment fields (exact second moment, bounds)");
  }
  MomentReport rep = build_moment_report(cfg.model, mu, cfg.grid, cfg.growth_p,
                                         cfg.moments_vv, true);
  CsvWriter w(out_path(cfg, "two_point.csv"), cfg.outputs.precision);
  w.row({"t", "x", "tau", "y", "upper", "lower"});
  for (const auto& s : rep.two_point_samples)
    w.row({w.num(s.t), w.num(s.x), w.num(s.tau), w.num(s.y), w.num(s.upper), w.num(s.lower)});
  summary(opt, w, "two-point correlation bounds");
}

EmpiricalMoments run_simulate(const RunConfig& cfg, const Options& opt) {
  if (!cfg.sim_enabled) throw domain_error("simulate: sim.enabled is false");
  InitialMeasure mu = cfg.measure.build();
  SimConfig sc = cfg.sim_config();
  if (opt.has_seed) sc.master_seed = opt.seed;
  EmpiricalMoments em = simulate(cfg.model, mu, sc, cfg.sim_n_threads);
  CsvWriter w(out_path(cfg, "empirical_moments.csv"), cfg.outputs.precision);
  w.row({"p", "t", "x", "value", "stderr"});
  for (std::size_t m = 0; m < em.p_values.size(); ++m)
    for (int i = 0; i < cfg.grid.nt; ++i)
      for (int j = 0; j < cfg.grid.nx; ++j)
        w.row({std::to_string(em.p_values[m]), w.num(cfg.grid.t(i)), w.num(cfg.grid.x(j)),
               w.num(em.moment_fields[m].at(i, j)), w.num(em.stderr_fields[m].at(i, j))});
  summary(opt, w,
          "empirical moments (" + std::to_string(em.n_paths) + " paths, seed " +
              std::to_string(sc.master_seed) + ")");
  return em;
}

void run_growth(const RunConfig& cfg, const Options& opt, const EmpiricalMoments* em) {
  InitialMeasure mu = cfg.measure.build();
  std::vector<double> alphas;
  if (em)
    for (double al : {0.25, 0.5, 1.0, 2.0}) alphas.push_back(al);
  GrowthReport rep = build_growth_report(cfg.model, mu, cfg.growth_p, cfg.growth_eta, em, alphas);
  const double inf = std::numeric_limits<double>::infinity();
  CsvWriter w(out_path(cfg, "growth.csv"), cfg.outputs.precision);
  w.row({"name", "quantity", "value"});
  w.row({"lyapunov", "upper", w.num(rep.upper_lyapunov_bound)});
  if (rep.strict_regime) w.row({"lyapunov", "lower", w.num(rep.lower_lyapunov_bound)});
  if (rep.has_beta) {
    w.row({"decay", "beta", w.num(rep.beta_decay)});
    w.row({"e-index", "upper", w.num(rep.e_upper_bound)});
  }
  if (rep.has_e_lower)
    w.row({"e-index", "lower",
           w.num(rep.e_lower_bound.is_infinite ? inf : rep.e_lower_bound.value)});
  if (rep.has_linear)
    w.row({"linear-index", "lambda",
           w.num(rep.linear_index.is_infinite ? inf : rep.linear_index.value)});
  for (const auto& c : rep.empirical_curves) {
    if (!c.admissible) continue;
    w.row({"empirical-slope", w.num(c.alpha), w.num(c.slope)});
    w.row({"empirical-drift", w.num(c.alpha), w.num(c.drift)});
  }
  summary(opt, w, "growth bounds for p=" + std::to_string(rep.p));
}

int run_verify(const RunConfig& cfg, const Options& opt) {
  auto results = run_verify_suite(cfg.model, cfg.verify_samples);
  double a = cfg.model.a;
  double beta = kPi * cfg.model.delta / 2.0;
  double as = cfg.model.a_star();
  double c3_proof = as * gamma_fn(1.0 + 1.0 / a) /
                    (std::pow(2.0, 1.0 / a) * kPi * std::pow(std::cos(beta), 1.0 / a));
  double carg = std::cos(std::pow(2.0, 1.0 / a) * beta);
  CsvWriter w(out_path(cfg, "verify.csv"), cfg.outputs.precision);
  w.row({"name", "quantity", "value"});
  w.row({"c1", "constant", w.num(detail::c1_const(a, beta))});
  if (carg > 0.0) {
    double c3_stmt = as * gamma_fn(1.0 + 1.0 / a) / (kPi * std::pow(carg, 1.0 / a));
    w.row({"c2", "constant", w.num((std::pow(2.0, 1.0 / as) - 1.0) * c3_stmt)});
    w.row({"c3", "constant", w.num(c3_stmt)});
  }
  w.row({"c2-proof", "constant", w.num((std::pow(2.0, 1.0 / a) - 1.0) * c3_proof)});
  w.row({"c3-proof", "constant", w.num(c3_proof)});
  w.row({"sup-g", "constant", w.num(std::pow(2.0, 1.0 / a) - 1.0)});
  for (const auto& r : results) w.row({r.name, "worst_margin", w.num(r.worst_margin)});
  for (const auto& r : results)
    w.row({r.name, "pass", std::to_string(r.pass ? 1 : 0)});
  bool ok = suite_passed(results);
  summary(opt, w,
          std::string("verification suite: ") + (ok ? "pass" : "FAIL"));
  if (!ok && !opt.quiet)
    for (const auto& r : results)
      if (!r.pass)
        std::cout << "  check failed: " << r.name << " worst_margin="
                  << csv_num(r.worst_margin, 6) << "\n";
  return ok ? 0 : 3;
}

int dispatch(const Options& opt, const RunConfig& cfg) {
  if (opt.subcommand == "green") {
    run_green(cfg, opt);
  } else if (opt.subcommand == "kernel") {
    run_kernel(cfg, opt);
  } else if (opt.subcommand == "moments") {
    run_moments(cfg, opt);
  } else if (opt.subcommand == "simulate") {
    run_simulate(cfg, opt);
  } else if (opt.subcommand == "growth") {
    run_growth(cfg, opt, nullptr);
  } else if (opt.subcommand == "verify") {
    return run_verify(cfg, opt);
  } else if (opt.subcommand == "all") {
    run_green(cfg, opt);
    run_kernel(cfg, opt);
    run_moments(cfg, opt);
    EmpiricalMoments em;
    const EmpiricalMoments* emp = nullptr;
    if (cfg.sim_enabled) {
      em = run_simulate(cfg, opt);
      emp = &em;
    }
    run_growth(cfg, opt, emp);
    return run_verify(cfg, opt);
  } else {
    usage(std::cerr);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (argc < 2) {
    usage(std::cerr);
    return 1;
  }
  opt.subcommand = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    auto need_value = [&](const char* flag) -> std::string {
      if (i + 1 >= argc) {
        throw fsheat::domain_error(std::string(flag) + " requires a value");
      }
      return argv[++i];
    };
    try {
      if (arg == "--config") {
        opt.config_path = need_value("--config");
      } else if (arg == "--set") {
        std::string kv = need_value("--set");
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw fsheat::domain_error("--set expects key=value");
        opt.overrides.emplace_back(fsheat::detail::trim(kv.substr(0, eq)),
                                   fsheat::detail::trim(kv.substr(eq + 1)));
      } else if (arg == "--out") {
        opt.out_dir = need_value("--out");
      } else if (arg == "--seed") {
        opt.seed = fsheat::detail::cfg_u64("--seed", need_value("--seed"));
        opt.has_seed = true;
      } else if (arg == "--quiet") {
        opt.quiet = true;
      } else {
        std::cerr << "unknown flag: " << arg << "\n";
        usage(std::cerr);
        return 1;
      }
    } catch (const fsheat::domain_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  if (opt.config_path.empty()) {
    std::cerr << "error: --config is required\n";
    usage(std::cerr);
    return 1;
  }

  try {
    fsheat::RunConfig cfg = fsheat::load_config(opt.config_path);
    for (const auto& [k, v] : opt.overrides) fsheat::apply_config_kv(cfg, k, v);
    if (!opt.out_dir.empty()) cfg.outputs.out_dir = opt.out_dir;
    std::filesystem::create_directories(cfg.outputs.out_dir);
    cfg.model.validate_solution();
    cfg.grid.validate();
    return dispatch(opt, cfg);
  } catch (const fsheat::accuracy_error& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 2;
  } catch (const fsheat::stability_error& e) {
    std::cerr << "stability error: " << e.what() << "\n";
    return 2;
  } catch (const fsheat::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
