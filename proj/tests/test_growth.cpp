#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fsheat/growth.hpp"

using namespace fsheat;

namespace {
ModelParams strict_params(double a = 1.5, double delta = 0.1, double lip = 1.0) {
  ModelParams p;
  p.a = a;
  p.delta = delta;
  p.lip_upper = lip;
  p.lip_lower = lip;
  return p;
}
}  // namespace

TEST_CASE("intermittency upper bound closed form and p-scaling") {
  ModelParams heat;
  heat.a = 2.0;
  heat.delta = 0.0;
  // a=2: exponent on p is 3
  double r = intermittency_upper(heat, 4) / intermittency_upper(heat, 2);
  CHECK(r == Catch::Approx(8.0).epsilon(1e-12));

  ModelParams zero = heat;
  zero.lip_upper = 0.0;
  CHECK(intermittency_upper(zero, 2) == 0.0);

  ModelParams p15 = strict_params(1.5, 0.1, 1.0);
  double lam_big = lambda_const(p15);
  double expect = 0.5 * std::pow(16.0 * lam_big * gamma_fn(1.0 / 3.0), 3.0) * std::pow(2.0, 4.0);
  CHECK(intermittency_upper(p15, 2) == Catch::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS(intermittency_upper(heat, 3), domain_error);
}

TEST_CASE("intermittency lower bound scaling and regime") {
  ModelParams p = strict_params();
  double v2 = intermittency_lower(p, 2.0);
  CHECK(v2 > 0.0);
  CHECK(intermittency_lower(p, 7.0) == Catch::Approx(3.5 * v2).epsilon(1e-14));
  CHECK(v2 == Catch::Approx(std::pow(upsilon_const(p, 1.0), 1.0 / p.b())).epsilon(1e-14));

  ModelParams nz = p;
  nz.lip_lower = 0.0;
  CHECK(intermittency_lower(nz, 2.0) == 0.0);

  ModelParams heat;
  heat.a = 2.0;
  CHECK_THROWS_AS(intermittency_lower(heat, 2.0), domain_error);
  CHECK_THROWS_AS(intermittency_lower(p, 1.0), domain_error);
}

TEST_CASE("e_upper formula and monotonicity") {
  ModelParams p = strict_params();
  double gh = moment_constants(p, 2).gamma_hat_p;
  CHECK(e_upper(p, 2, 1.0) == Catch::Approx(std::pow(gh, 3.0)).epsilon(1e-12));
  CHECK(e_upper(p, 2, 2.0) < e_upper(p, 2, 1.0));
  CHECK(e_upper(p, 4, 1.0) > e_upper(p, 2, 1.0));
  CHECK(e_upper(p, 2, 1e6) < 1e-3 * e_upper(p, 2, 1.0));
  CHECK_THROWS_AS(e_upper(p, 2, 0.0), domain_error);
  CHECK_THROWS_AS(e_upper(p, 3, 1.0), domain_error);
}

TEST_CASE("e_lower regimes and infinity sentinel") {
  ModelParams p = strict_params();
  auto mu = InitialMeasure::dirac();
  auto b = e_lower(p, mu);
  CHECK_FALSE(b.is_infinite);
  CHECK(b.value == Catch::Approx(0.5 * std::pow(upsilon_const(p, 1.0), 1.0 / p.b())));

  ModelParams pv = p;
  pv.vip_lower = 0.3;
  CHECK(e_lower(pv, mu).is_infinite);

  auto leb = InitialMeasure::lebesgue();
  CHECK(bounded_below_data(leb));
  CHECK(e_lower(p, leb).is_infinite);
  CHECK(e_lower(p, mu, true).is_infinite);

  InitialMeasure zero;
  CHECK_THROWS_AS(e_lower(p, zero), domain_error);
  auto neg = InitialMeasure::dirac(-1.0);
  CHECK_THROWS_AS(e_lower(p, neg), domain_error);

  ModelParams heat;
  heat.a = 2.0;
  heat.lip_lower = 1.0;
  CHECK_THROWS_AS(e_lower(heat, mu), domain_error);
}

TEST_CASE("min_y closed form matches the worked example") {
  // beta=2, x=1: minimum 1/4 + 1/2
  CHECK(min_y_closed_form(1.0, 2.0) == Catch::Approx(0.75).epsilon(1e-14));
  // inner branch |x| < beta^{1/(1-beta)}
  CHECK(min_y_closed_form(0.3, 2.0) == Catch::Approx(0.09).epsilon(1e-14));
  CHECK_THROWS_AS(min_y_closed_form(1.0, 1.0), domain_error);
}

TEST_CASE("decay beta from measure") {
  ModelParams p = strict_params();
  auto mu = InitialMeasure::dirac();
  CHECK(decay_beta_from_measure(p, mu, 3.0) == Catch::Approx(2.5));
  CHECK(decay_beta_from_measure(p, mu, 1.0) == Catch::Approx(1.0));

  auto leb = InitialMeasure::lebesgue();
  CHECK_THROWS_AS(decay_beta_from_measure(p, leb, 2.0), domain_error);

  InitialMeasure pw;
  pw.has_density = true;
  pw.support_lo = -1.0;
  pw.support_hi = 1.0;
  pw.density = {1.0, 1.0};
  pw.tail = TailModel::power;
  pw.tail_level = 1.0;
  pw.tail_eta = 5.0;
  CHECK(decay_beta_from_measure(p, pw, 3.0) == Catch::Approx(2.5));
  CHECK_THROWS_AS(decay_beta_from_measure(p, pw, 4.5), domain_error);
}

TEST_CASE("lower bounds stay below upper bounds for compatible constants") {
  auto mu = InitialMeasure::dirac();
  for (double a : {1.3, 1.5, 1.7}) {
    for (double frac : {0.0, 0.5, -0.5}) {
      for (double lip : {0.5, 1.0}) {
        ModelParams p = strict_params(a, frac * (2.0 - a), lip);
        for (int pp : {2, 4}) {
          CHECK(intermittency_lower(p, pp) <= intermittency_upper(p, pp));
          auto el = e_lower(p, mu);
          REQUIRE_FALSE(el.is_infinite);
          CHECK(el.value <= e_upper(p, pp, 1.0 + a) * (1.0 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("empirical growth curve on synthetic fields") {
  GridSpec g;
  g.t_min = 0.2;
  g.t_max = 2.0;
  g.nt = 16;
  g.x_half_width = 10.0;
  g.nx = 101;
  EmpiricalMoments em;
  em.p_values = {2};
  em.n_paths = 2;
  ScalarField f;
  f.grid = g;
  f.values.assign(static_cast<std::size_t>(g.nt) * g.nx, 0.0);
  const double c = 0.8;
  for (int i = 0; i < g.nt; ++i)
    for (int j = 0; j < g.nx; ++j)
      f.values[static_cast<std::size_t>(i) * g.nx + j] = std::exp(c * g.t(i));
  em.moment_fields.push_back(f);
  em.stderr_fields.push_back(f);

  auto curves = empirical_growth_curve(em, 2, {0.5, 1.0, 5.0});
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].admissible);
  CHECK(curves[0].slope == Catch::Approx(c).margin(1e-9));
  CHECK(std::fabs(curves[0].drift) < 1e-9);
  CHECK(curves[1].admissible);
  CHECK(curves[1].slope == Catch::Approx(c).margin(1e-9));
  CHECK_FALSE(curves[2].admissible);  // exp(5*2) >> window

  // bounded field: no growth
  std::fill(em.moment_fields[0].values.begin(), em.moment_fields[0].values.end(), 1.0);
  auto flat = empirical_growth_curve(em, 2, {0.5});
  REQUIRE(flat[0].admissible);
  CHECK(std::fabs(flat[0].slope) < 1e-12);

  CHECK_THROWS_AS(empirical_growth_curve(em, 4, {0.5}), domain_error);
}

TEST_CASE("growth report assembles the pieces") {
  ModelParams p = strict_params();
  auto mu = InitialMeasure::dirac();
  auto rep = build_growth_report(p, mu, 2, 3.0);
  CHECK(rep.p == 2);
  CHECK(rep.strict_regime);
  CHECK(rep.has_beta);
  CHECK(rep.beta_decay == Catch::Approx(2.5));
  CHECK(rep.has_e_lower);
  CHECK_FALSE(rep.e_lower_bound.is_infinite);
  CHECK(rep.has_linear);
  CHECK(rep.linear_index.is_infinite);
  CHECK(rep.lower_lyapunov_bound <= rep.upper_lyapunov_bound);
  CHECK(rep.empirical_curves.empty());

  ModelParams heat;
  heat.a = 2.0;
  auto leb = InitialMeasure::lebesgue();
  auto rep2 = build_growth_report(heat, leb, 2, 2.0);
  CHECK_FALSE(rep2.strict_regime);
  CHECK_FALSE(rep2.has_beta);  // Lebesgue eta-moment diverges
  CHECK(rep2.has_e_lower);
  CHECK(rep2.e_lower_bound.is_infinite);
  CHECK(rep2.has_linear);
}
