#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fsheat/config.hpp"

using namespace fsheat;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("FSHEAT_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WEXITSTATUS(st);
}

fs::path work_dir() {
  fs::path d = fs::temp_directory_path() / "fsheat_cli_test";
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kHeatCfg =
    "model.a = 2.0\n"
    "model.delta = 0\n"
    "grid.t_min = 0.1\n"
    "grid.t_max = 1.0\n"
    "grid.nt = 5\n"
    "grid.nx = 17\n"
    "grid.x_half_width = 4\n"
    "verify.samples = 16\n";

}  // namespace

TEST_CASE("config round-trip is idempotent") {
  RunConfig cfg = parse_config(
      "# comment line\n"
      "model.a = 1.7\n"
      "model.delta = -0.25\n"
      "\n"
      "measure.kind = lebesgue\n"
      "measure.level = 0.5\n"
      "grid.nt = 12\n"
      "sim.enabled = true\n"
      "sim.n_paths = 40\n"
      "sim.rho.kind = near_linear\n"
      "sim.rho.lam = 0.3\n"
      "sim.rho.offset = 1.25\n"
      "sim.p_values = 2, 4\n"
      "outputs.precision = 9\n");
  CHECK(cfg.model.a == 1.7);
  CHECK(cfg.measure.kind == "lebesgue");
  CHECK(cfg.rho.kind == RhoKind::near_linear);
  REQUIRE(cfg.sim_p_values.size() == 2);
  CHECK(cfg.sim_p_values[1] == 4);
  std::string s1 = serialize_config(cfg);
  std::string s2 = serialize_config(parse_config(s1));
  CHECK(s1 == s2);

  // custom measure and rho table survive the round trip too
  RunConfig c2 = parse_config(
      "measure.kind = custom\n"
      "measure.support_lo = -2\n"
      "measure.support_hi = 2\n"
      "measure.density = 0.5,1,0.5\n"
      "measure.tail = power\n"
      "measure.tail_level = 0.1\n"
      "measure.tail_eta = 3\n"
      "sim.enabled = true\n"
      "sim.rho.kind = custom\n"
      "sim.rho.table_u = -1,0,1\n"
      "sim.rho.table_rho = 0.5,0,0.5\n"
      "sim.rho.lip = 0.5\n"
      "sim.rho.lip_lower = 0.1\n");
  CHECK(serialize_config(c2) == serialize_config(parse_config(serialize_config(c2))));
  CHECK(c2.measure.build().has_density);

  CHECK_THROWS_AS(parse_config("model.bogus = 1\n"), domain_error);
  CHECK_THROWS_AS(parse_config("model.a 2.0\n"), domain_error);
  CHECK_THROWS_AS(parse_config("model.a = two\n"), domain_error);
}

TEST_CASE("verify subcommand: heat defaults pass with the C1 constant row") {
  fs::path d = work_dir();
  write_file(d / "heat.cfg", kHeatCfg);
  int rc = run_cli("verify --config " + (d / "heat.cfg").string() + " --out " +
                   (d / "v").string() + " --quiet");
  CHECK(rc == 0);
  auto rows = read_csv(d / "v" / "verify.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"name", "quantity", "value"});
  bool found_c1 = false;
  for (const auto& r : rows)
    if (r.size() == 3 && r[0] == "c1" && r[1] == "constant") {
      found_c1 = true;
      CHECK(std::stod(r[2]) == Catch::Approx(0.5).margin(1e-8));
    }
  CHECK(found_c1);
}

TEST_CASE("verify subcommand: skewed fractional case exits 3") {
  fs::path d = work_dir();
  write_file(d / "heat.cfg", kHeatCfg);
  int rc = run_cli("verify --config " + (d / "heat.cfg").string() +
                   " --set model.a=1.5 --set model.delta=0.1 --out " + (d / "v3").string() +
                   " --quiet");
  CHECK(rc == 3);
  auto rows = read_csv(d / "v3" / "verify.csv");
  bool c2_fail = false, c3_pass = false;
  for (const auto& r : rows) {
    if (r.size() == 3 && r[1] == "pass") {
      if (r[0] == "prop-g-c2-proof") c2_fail = (r[2] == "0");
      if (r[0] == "prop-g-c3-proof") c3_pass = (r[2] == "1");
    }
  }
  CHECK(c2_fail);
  CHECK(c3_pass);
}

TEST_CASE("moments subcommand: lambda = 0 reduces to J0 squared") {
  fs::path d = work_dir();
  write_file(d / "m.cfg", kHeatCfg + "model.lambda = 0\nmeasure.kind = dirac\n");
  int rc = run_cli("moments --config " + (d / "m.cfg").string() + " --out " +
                   (d / "m").string() + " --quiet");
  REQUIRE(rc == 0);
  auto rows = read_csv(d / "m" / "moments.csv");
  REQUIRE(rows.size() > 1);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"t", "x", "j0", "second_moment", "second_lower",
                                   "second_upper"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double j0 = std::stod(rows[i][2]);
    double sec = std::stod(rows[i][3]);
    CHECK(std::fabs(sec - j0 * j0) <= 1e-12 * std::max(1.0, j0 * j0));
  }
}

TEST_CASE("simulate subcommand: identical seeds give byte-identical CSVs") {
  fs::path d = work_dir();
  write_file(d / "s.cfg", kHeatCfg +
                              "sim.enabled = true\n"
                              "sim.n_paths = 16\n"
                              "sim.rho.kind = linear\n"
                              "sim.rho.lam = 0.5\n"
                              "model.lip_upper = 0.5\n"
                              "model.lip_lower = 0.5\n");
  std::string base = "simulate --config " + (d / "s.cfg").string() + " --seed 42 --quiet --out ";
  REQUIRE(run_cli(base + (d / "s1").string()) == 0);
  REQUIRE(run_cli(base + (d / "s2").string()) == 0);
  std::string f1 = read_file(d / "s1" / "empirical_moments.csv");
  CHECK(f1 == read_file(d / "s2" / "empirical_moments.csv"));
  // thread count must not change the bytes either
  REQUIRE(run_cli("simulate --config " + (d / "s.cfg").string() +
                  " --seed 42 --quiet --set sim.n_threads=3 --out " + (d / "s3").string()) == 0);
  CHECK(f1 == read_file(d / "s3" / "empirical_moments.csv"));
  // a different seed must change them
  REQUIRE(run_cli("simulate --config " + (d / "s.cfg").string() +
                  " --seed 43 --quiet --out " + (d / "s4").string()) == 0);
  CHECK(f1 != read_file(d / "s4" / "empirical_moments.csv"));
  auto rows = read_csv(d / "s1" / "empirical_moments.csv");
  CHECK(rows[0] == std::vector<std::string>{"p", "t", "x", "value", "stderr"});
  CHECK(rows.size() == 1 + 5 * 17);
}

TEST_CASE("growth and green subcommands produce their artifacts") {
  fs::path d = work_dir();
  write_file(d / "g.cfg", kHeatCfg + "model.lambda = 0.5\ngrowth.eta = 3\n");
  REQUIRE(run_cli("green --config " + (d / "g.cfg").string() + " --out " + (d / "g").string() +
                  " --quiet") == 0);
  auto rows = read_csv(d / "g" / "green.csv");
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "value"});
  CHECK(rows.size() == 1 + 5 * 17);
  REQUIRE(run_cli("growth --config " + (d / "g.cfg").string() + " --out " + (d / "g").string() +
                  " --quiet") == 0);
  auto gr = read_csv(d / "g" / "growth.csv");
  CHECK(gr[0] == std::vector<std::string>{"name", "quantity", "value"});
  bool has_upper = false;
  for (const auto& r : gr)
    if (r.size() == 3 && r[0] == "lyapunov" && r[1] == "upper") has_upper = true;
  CHECK(has_upper);
}

TEST_CASE("exit codes for bad invocations") {
  fs::path d = work_dir();
  write_file(d / "heat.cfg", kHeatCfg);
  CHECK(run_cli("frobnicate --config " + (d / "heat.cfg").string()) == 1);
  CHECK(run_cli("verify") == 1);  // missing --config
  CHECK(run_cli("verify --config " + (d / "does_not_exist.cfg").string()) == 1);
  CHECK(run_cli("verify --config " + (d / "heat.cfg").string() + " --set nope=1") == 1);
  CHECK(run_cli("verify --config " + (d / "heat.cfg").string() + " --set model.a=2.5") == 1);
  // simulate without sim.enabled is a config error
  CHECK(run_cli("simulate --config " + (d / "heat.cfg").string() + " --out " +
                (d / "x").string()) == 1);
}
