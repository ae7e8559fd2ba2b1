#pragma once

// Flat line-oriented `key = value` run configuration with dotted sections
// (model.a = 1.5).  Parsing then re-serializing is idempotent: serialization
// is canonical (fixed key order, shortest round-trip float format).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fsheat/errors.hpp"
#include "fsheat/grid.hpp"
#include "fsheat/measure.hpp"
#include "fsheat/model.hpp"
#include "fsheat/simulator.hpp"

namespace fsheat {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double cfg_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw domain_error("config: bad number for " + key + ": '" + v + "'");
  }
}

inline int cfg_int(const std::string& key, const std::string& v) {
  double d = cfg_double(key, v);
  int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) throw domain_error("config: " + key + " must be an integer");
  return i;
}

inline std::uint64_t cfg_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    std::uint64_t u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw domain_error("config: bad unsigned integer for " + key + ": '" + v + "'");
  }
}

inline bool cfg_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw domain_error("config: " + key + " must be true/false");
}

inline std::vector<double> cfg_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(cfg_double(key, item));
  }
  if (out.empty()) throw domain_error("config: empty list for " + key);
  return out;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int p = 1; p <= 16; ++p) {
    char trial[40];
    std::snprintf(trial, sizeof trial, "%.*g", p, v);
    std::sscanf(trial, "%lf", &back);
    if (back == v) return trial;
  }
  return buf;
}

inline std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(vs[i]);
  }
  return out;
}

}  // namespace detail

/// Initial-measure description in config terms; built into an InitialMeasure.
struct MeasureSpec {
  std::string kind = "dirac";  // dirac | lebesgue | custom
  double mass = 1.0;
  double location = 0.0;
  double level = 1.0;
  double support_lo = -1.0;
  double support_hi = 1.0;
  std::vector<double> density;
  std::string tail = "none";  // none | constant | power
  double tail_level = 0.0;
  double tail_eta = 0.0;

  InitialMeasure build() const {
    if (kind == "dirac") return InitialMeasure::dirac(mass, location);
    if (kind == "lebesgue") return InitialMeasure::lebesgue(level);
    if (kind == "custom") {
      InitialMeasure mu;
      mu.has_density = !density.empty();
      mu.support_lo = support_lo;
      mu.support_hi = support_hi;
      mu.density = density;
      if (tail == "none")
        mu.tail = TailModel::none;
      else if (tail == "constant")
        mu.tail = TailModel::constant;
      else if (tail == "power")
        mu.tail = TailModel::power;
      else
        throw domain_error("config: measure.tail must be none/constant/power");
      mu.tail_level = tail_level;
      mu.tail_eta = tail_eta;
      if (mass != 0.0 && !mu.has_density && mu.tail == TailModel::none)
        mu.atoms.push_back({location, mass});
      mu.validate();
      return mu;
    }
    throw domain_error("config: measure.kind must be dirac/lebesgue/custom");
  }
};

struct OutputSpec {
  std::string out_dir = ".";
  int precision = 12;
};

struct RunConfig {
  ModelParams model;
  MeasureSpec measure;
  GridSpec grid;
  bool sim_enabled = false;
  int sim_n_paths = 2;
  std::uint64_t sim_master_seed = 0;
  int sim_substeps = 1;
  double sim_boundary_tol = 1e-4;
  std::vector<int> sim_p_values = {2};
  int sim_n_threads = 1;
  RhoSpec rho;
  OutputSpec outputs;
  int growth_p = 2;
  double growth_eta = 2.0;
  int verify_samples = 40;
  double kernel_tol = 1e-6;
  double moments_vv = 0.0;  // v of the near-linear rho in the exact formula

  SimConfig sim_config() const {
    SimConfig sc;
    sc.grid = grid;
    sc.n_paths = sim_n_paths;
    sc.master_seed = sim_master_seed;
    sc.rho = rho;
    sc.substeps = sim_substeps;
    sc.p_values = sim_p_values;
    sc.boundary_tol = sim_boundary_tol;
    return sc;
  }
};

/// Applies one key = value assignment (file line or --set override).
inline void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& val) {
  using namespace detail;
  if (key == "model.a") cfg.model.a = cfg_double(key, val);
  else if (key == "model.delta") cfg.model.delta = cfg_double(key, val);
  else if (key == "model.lambda") cfg.model.lambda = cfg_double(key, val);
  else if (key == "model.lip_upper") cfg.model.lip_upper = cfg_double(key, val);
  else if (key == "model.vip_upper") cfg.model.vip_upper = cfg_double(key, val);
  else if (key == "model.lip_lower") cfg.model.lip_lower = cfg_double(key, val);
  else if (key == "model.vip_lower") cfg.model.vip_lower = cfg_double(key, val);
  else if (key == "measure.kind") cfg.measure.kind = val;
  else if (key == "measure.mass") cfg.measure.mass = cfg_double(key, val);
  else if (key == "measure.location") cfg.measure.location = cfg_double(key, val);
  else if (key == "measure.level") cfg.measure.level = cfg_double(key, val);
  else if (key == "measure.support_lo") cfg.measure.support_lo = cfg_double(key, val);
  else if (key == "measure.support_hi") cfg.measure.support_hi = cfg_double(key, val);
  else if (key == "measure.density") cfg.measure.density = cfg_list(key, val);
  else if (key == "measure.tail") cfg.measure.tail = val;
  else if (key == "measure.tail_level") cfg.measure.tail_level = cfg_double(key, val);
  else if (key == "measure.tail_eta") cfg.measure.tail_eta = cfg_double(key, val);
  else if (key == "grid.t_min") cfg.grid.t_min = cfg_double(key, val);
  else if (key == "grid.t_max") cfg.grid.t_max = cfg_double(key, val);
  else if (key == "grid.nt") cfg.grid.nt = cfg_int(key, val);
  else if (key == "grid.x_half_width") cfg.grid.x_half_width = cfg_double(key, val);
  else if (key == "grid.nx") cfg.grid.nx = cfg_int(key, val);
  else if (key == "sim.enabled") cfg.sim_enabled = cfg_bool(key, val);
  else if (key == "sim.n_paths") cfg.sim_n_paths = cfg_int(key, val);
  else if (key == "sim.master_seed") cfg.sim_master_seed = cfg_u64(key, val);
  else if (key == "sim.substeps") cfg.sim_substeps = cfg_int(key, val);
  else if (key == "sim.boundary_tol") cfg.sim_boundary_tol = cfg_double(key, val);
  else if (key == "sim.p_values") {
    cfg.sim_p_values.clear();
    for (double d : cfg_list(key, val)) cfg.sim_p_values.push_back(cfg_int(key, fmt_double(d)));
  } else if (key == "sim.n_threads") cfg.sim_n_threads = cfg_int(key, val);
  else if (key == "sim.rho.kind") {
    if (val == "linear") cfg.rho.kind = RhoKind::linear;
    else if (val == "near_linear") cfg.rho.kind = RhoKind::near_linear;
    else if (val == "custom") cfg.rho.kind = RhoKind::custom;
    else throw domain_error("config: sim.rho.kind must be linear/near_linear/custom");
  } else if (key == "sim.rho.lam") cfg.rho.lam = cfg_double(key, val);
  else if (key == "sim.rho.offset") cfg.rho.offset = cfg_double(key, val);
  else if (key == "sim.rho.table_u") cfg.rho.table_u = cfg_list(key, val);
  else if (key == "sim.rho.table_rho") cfg.rho.table_rho = cfg_list(key, val);
  else if (key == "sim.rho.lip") cfg.rho.lip_declared = cfg_double(key, val);
  else if (key == "sim.rho.lip_lower") cfg.rho.lip_lower_declared = cfg_double(key, val);
  else if (key == "outputs.out_dir") cfg.outputs.out_dir = val;
  else if (key == "outputs.precision") cfg.outputs.precision = cfg_int(key, val);
  else if (key == "growth.p") cfg.growth_p = cfg_int(key, val);
  else if (key == "growth.eta") cfg.growth_eta = cfg_double(key, val);
  else if (key == "verify.samples") cfg.verify_samples = cfg_int(key, val);
  else if (key == "kernel.tol") cfg.kernel_tol = cfg_double(key, val);
  else if (key == "moments.vv") cfg.moments_vv = cfg_double(key, val);
  else throw domain_error("config: unknown key '" + key + "'");
}

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw domain_error("config: line " + std::to_string(lineno) + " is not key = value");
    apply_config_kv(cfg, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical serialization; parse(serialize(cfg)) reproduces cfg exactly.
inline std::string serialize_config(const RunConfig& cfg) {
  using detail::fmt_double;
  std::ostringstream out;
  auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << "\n"; };
  kv("model.a", fmt_double(cfg.model.a));
  kv("model.delta", fmt_double(cfg.model.delta));
  kv("model.lambda", fmt_double(cfg.model.lambda));
  kv("model.lip_upper", fmt_double(cfg.model.lip_upper));
  kv("model.vip_upper", fmt_double(cfg.model.vip_upper));
  kv("model.lip_lower", fmt_double(cfg.model.lip_lower));
  kv("model.vip_lower", fmt_double(cfg.model.vip_lower));
  kv("measure.kind", cfg.measure.kind);
  if (cfg.measure.kind == "dirac") {
    kv("measure.mass", fmt_double(cfg.measure.mass));
    kv("measure.location", fmt_double(cfg.measure.location));
  } else if (cfg.measure.kind == "lebesgue") {
    kv("measure.level", fmt_double(cfg.measure.level));
  } else {
    kv("measure.support_lo", fmt_double(cfg.measure.support_lo));
    kv("measure.support_hi", fmt_double(cfg.measure.support_hi));
    if (!cfg.measure.density.empty()) kv("measure.density", detail::fmt_list(cfg.measure.density));
    kv("measure.tail", cfg.measure.tail);
    kv("measure.tail_level", fmt_double(cfg.measure.tail_level));
    kv("measure.tail_eta", fmt_double(cfg.measure.tail_eta));
  }
  kv("grid.t_min", fmt_double(cfg.grid.t_min));
  kv("grid.t_max", fmt_double(cfg.grid.t_max));
  kv("grid.nt", std::to_string(cfg.grid.nt));
  kv("grid.x_half_width", fmt_double(cfg.grid.x_half_width));
  kv("grid.nx", std::to_string(cfg.grid.nx));
  kv("sim.enabled", cfg.sim_enabled ? "true" : "false");
  if (cfg.sim_enabled) {
    kv("sim.n_paths", std::to_string(cfg.sim_n_paths));
    kv("sim.master_seed", std::to_string(cfg.sim_master_seed));
    kv("sim.substeps", std::to_string(cfg.sim_substeps));
    kv("sim.boundary_tol", fmt_double(cfg.sim_boundary_tol));
    {
      std::string pv;
      for (std::size_t i = 0; i < cfg.sim_p_values.size(); ++i) {
        if (i) pv += ",";
        pv += std::to_string(cfg.sim_p_values[i]);
      }
      kv("sim.p_values", pv);
    }
    kv("sim.n_threads", std::to_string(cfg.sim_n_threads));
    kv("sim.rho.kind", cfg.rho.kind == RhoKind::linear
                           ? "linear"
                           : (cfg.rho.kind == RhoKind::near_linear ? "near_linear" : "custom"));
    kv("sim.rho.lam", fmt_double(cfg.rho.lam));
    if (cfg.rho.kind == RhoKind::near_linear) kv("sim.rho.offset", fmt_double(cfg.rho.offset));
    if (cfg.rho.kind == RhoKind::custom) {
      kv("sim.rho.table_u", detail::fmt_list(cfg.rho.table_u));
      kv("sim.rho.table_rho", detail::fmt_list(cfg.rho.table_rho));
      kv("sim.rho.lip", fmt_double(cfg.rho.lip_declared));
      kv("sim.rho.lip_lower", fmt_double(cfg.rho.lip_lower_declared));
    }
  }
  kv("outputs.out_dir", cfg.outputs.out_dir);
  kv("outputs.precision", std::to_string(cfg.outputs.precision));
  kv("growth.p", std::to_string(cfg.growth_p));
  kv("growth.eta", fmt_double(cfg.growth_eta));
  kv("verify.samples", std::to_string(cfg.verify_samples));
  kv("kernel.tol", fmt_double(cfg.kernel_tol));
  kv("moments.vv", fmt_double(cfg.moments_vv));
  return out.str();
}

}  // namespace fsheat
