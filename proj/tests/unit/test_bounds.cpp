#include <doctest.h>

#include <cmath>

#include "degenspec/bounds.hpp"

using namespace degenspec;
using doctest::Approx;

namespace {

SpectrumResult synthetic(double (*f)(double), int n) {
  SpectrumResult r;
  for (int i = 1; i <= n; ++i) {
    r.e.push_back(f(i));
    r.residuals.push_back(0.0);
  }
  return r;
}

}  // namespace

TEST_CASE("theorem tags round trip") {
  for (auto t : all_theorem_tags()) CHECK(theorem_tag_from_string(to_string(t)) == t);
  CHECK(to_string(TheoremTag::T4_1_1) == "T4.1(1)");
  CHECK_THROWS(theorem_tag_from_string("T9.9"));
}

TEST_CASE("structural right-hand sides") {
  TorusGrid lat(2, 8, 1.0);
  BoundParams p;
  p.e = 2.0;
  p.m = 2.0;
  CHECK(rhs_structural(TheoremTag::T4_1_1, delta_potential(lat, 1.0), lat, p) == Approx(0.25));
  p.e = 0.5;
  CHECK(rhs_structural(TheoremTag::T4_1_1, delta_potential(lat, 1.0), lat, p) == Approx(2.0));

  TorusGrid cont(2, 8, 0.25);
  p = BoundParams{};
  CHECK(rhs_structural(TheoremTag::T3_2_1, zero_potential(cont), cont, p) == 0.0);

  p = BoundParams{};
  p.d = 2;
  p.s = 2.0;
  p.q = 1.0;
  p.m = 4.0;
  p.e = 4.0;
  p.r = 1.0;
  CHECK_THROWS(rhs_structural(TheoremTag::T3_1_3, delta_potential(cont, 2.0), cont, p));

  p.q = 1.5;
  p.m = sigma_exponent_general(ExponentTable{2, 1.0, p.epsilon}, 1.5);
  const auto v = delta_potential(cont, 2.0);
  const double norm_m = std::pow(v.lp_norm(cont, 1.5), p.m);
  CHECK(rhs_structural(TheoremTag::T3_1_3, v, cont, p) == Approx(norm_m * std::pow(4.0, p.m * 2.0 / (2.0 * 1.5) - p.m)));
  p.e = 0.25;
  CHECK(rhs_structural(TheoremTag::T3_1_3, v, cont, p) == Approx(norm_m * std::pow(std::log(6.0), p.m)));
}

TEST_CASE("hypotheses are enforced") {
  BoundParams p;
  p.d = 2;
  p.q = 1.5;
  p.r = 0.5;
  p.m = 3.0;
  p.gamma = 3.5;
  CHECK_NOTHROW(check_hypotheses(TheoremTag::T4_3, p));
  p.gamma = 2.0;
  CHECK_THROWS(check_hypotheses(TheoremTag::T4_3, p));
  p.gamma = 3.5;
  p.m = 2.5;
  CHECK_THROWS(check_hypotheses(TheoremTag::T4_3, p));
  BoundParams c;
  c.s = 1.0;
  c.p = 2.0;
  CHECK_THROWS(check_hypotheses(TheoremTag::T4_5, c));
}

TEST_CASE("zero family passes vacuously") {
  TorusGrid g(2, 8, 1.0);
  BoundParams p;
  p.gamma = 1.0;
  const auto rep = run_bound_family(TheoremTag::T4_2_1, SymbolSpec::lattice_bcs(2, 0.5), g, {{"zero", 1.0, 0.0, 0}}, p);
  CHECK(rep.pass);
  CHECK(rep.positive_instances == 0);
  for (const auto& r : rep.records) CHECK(r.lhs == 0.0);
}

TEST_CASE("Schatten norm of BS(e) grows at most like 1/e without curvature") {
  TorusGrid g(2, 16, 1.0);
  const auto sweep = schatten_e_sweep(SymbolSpec::lattice_bcs(2, 0.5), gaussian_potential(g, 1.0, 2.0), g, 2.0,
                                      {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625});
  CHECK(sweep.fitted == 6);
  CHECK(sweep.slope >= -1.15);
  for (std::size_t i = 1; i < sweep.norm_pow.size(); ++i) CHECK(sweep.norm_pow[i] >= sweep.norm_pow[i - 1]);
}

TEST_CASE("log-moment bound with the curved-surface exponent") {
  TorusGrid g(2, 16, 1.0);
  BoundParams p;
  p.d = 2;
  p.q = 1.5;
  p.r = 0.5;
  p.m = sigma_exponent_general({2, 0.5, 1e-2}, 1.5);
  p.gamma = 3.5;
  CHECK(p.m == Approx(3.0));
  const auto rep = run_bound_family(TheoremTag::T4_3, SymbolSpec::lattice_bcs(2, 0.5), g, {{"gaussian", 1.0, 2.0, 0}},
                                    p, {0.5, 1.0, 2.0, 4.0});
  CHECK(rep.positive_instances == 4);
  CHECK(rep.pass);
  for (const auto& r : rep.records) CHECK(r.lhs <= rep.c_hat * r.rhs * (1.0 + 1e-12));
}

TEST_CASE("clustering rate of synthetic spectra") {
  auto r = cluster_rate_check(synthetic([](double n) { return std::exp(-n); }, 30), 1.0, 1.0, 1.0);
  CHECK(r.conclusive);
  CHECK(r.slope == Approx(1.0).epsilon(1e-10));
  r = cluster_rate_check(synthetic([](double n) { return std::exp(-std::cbrt(n)); }, 30), 1.0, 1.0, 1.0);
  CHECK(std::abs(r.slope - 1.0 / 3.0) < 1e-6);
  CHECK(r.predicted == 1.0);

  TorusGrid g(2, 16, 1.0);
  const auto res = negative_eigenvalues(SymbolSpec::lattice_bcs(2, 0.5), gaussian_potential(g, 3.0, 2.5), g);
  REQUIRE(res.e.size() > 20);
  r = cluster_rate_check(res, 1.5, 3.0, 1.0);
  CHECK(r.conclusive);
  CHECK(r.residual < 0.5);
}

TEST_CASE("weak coupling sweep") {
  const auto spec = SymbolSpec::lattice_bcs(2, 0.5);
  const auto mesh = extract_level_set(spec, 0.0);
  TorusGrid g(2, 16, 1.0);
  SUBCASE("no potential, no bound states") {
    const auto fit = weak_coupling_sweep(spec, zero_potential(g), g, mesh, {0.05, 0.1, 0.2});
    CHECK_FALSE(fit.conclusive);
    for (const auto& pt : fit.points) CHECK(std::isnan(pt.e[0]));
    CHECK(fit.a_surface[0] == 0.0);
  }
  SUBCASE("the fit is linear in the coupling") {
    const std::vector<double> lam{0.3, 0.35, 0.4, 0.45, 0.5, 0.6};
    std::vector<double> half;
    for (double l : lam) half.push_back(0.5 * l);
    const auto one = weak_coupling_sweep(spec, delta_potential(g, 1.0), g, mesh, lam, {1}, 1.0);
    const auto two = weak_coupling_sweep(spec, delta_potential(g, 2.0), g, mesh, half, {1}, 1.0);
    REQUIRE(one.conclusive);
    REQUIRE(two.conclusive);
    CHECK(two.a_fit[0] == Approx(2.0 * one.a_fit[0]).epsilon(1e-6));
    CHECK(two.a_surface[0] == Approx(2.0 * one.a_surface[0]).epsilon(1e-10));
    CHECK(one.a_surface[0] == Approx(surface_measure_total(mesh)).epsilon(1e-10));
  }
}

TEST_CASE("CLR scaling study") {
  SUBCASE("lattice sub-level measure") {
    TorusGrid g(2, 16, 1.0);
    const auto spec = SymbolSpec::lattice_bcs(2, 0.5, LatticeBase::Standard, 2.0);
    const auto st = clr_scaling_study(spec, 2.0, gaussian_potential(g, 0.5, 2.0), g, {1.0, 2.0, 4.0, 8.0}, {0.3}, 2048);
    REQUIRE(st.halving_ratios.size() == 1);
    CHECK(st.halving_ratios[0] >= 16.0 * 0.7);
    for (std::size_t i = 1; i < st.n0.size(); ++i) CHECK(st.n0[i] >= st.n0[i - 1]);
    CHECK_THROWS(clr_scaling_study(SymbolSpec::lattice_bcs(2, 0.5), 2.0, gaussian_potential(g, 0.5, 2.0), g, {1.0}, {}));
  }
  SUBCASE("continuum counting function per unit norm") {
    TorusGrid g(2, 32, 0.075);
    const auto spec = SymbolSpec::continuum_bcs_power(2, 2.0);
    const auto st = clr_scaling_study(spec, 2.0, gaussian_potential(g, 1.0, 0.5), g, {1.0, 2.0, 4.0, 8.0}, {});
    for (std::size_t i = 0; i < st.n0.size(); ++i) {
      const double ratio = double(st.n0[i]) / st.norm_pow[i];
      CHECK(std::isfinite(ratio));
      MESSAGE("kappa=" << st.kappas[i] << " N0=" << st.n0[i] << " ratio=" << ratio);
    }
  }
}
