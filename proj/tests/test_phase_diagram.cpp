#include <cmath>
#include <numbers>

#include "doctest.h"

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/exact_engine.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

using namespace ipdsaw;

TEST_CASE("beta_c") {
  const double bc = beta_c();
  CHECK(std::abs(bc - 1.219) <= 1e-3);
  CHECK(std::abs(gamma_beta(bc) - 1.0) <= 1e-10);
  // Gamma = 1 in z = e^{beta/2} reads z^3 - z^2 - z - 1 = 0
  const double z = std::exp(bc / 2);
  CHECK(std::abs(z * z * z - z * z - z - 1.0) <= 1e-12);
}

TEST_CASE("transfer-operator growth rate") {
  CHECK(frak_h(1.0, 0.0).value == 0.0);
  double prev = 0.0;
  for (double u : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const double v = frak_h_auto(1.0, u);
    CHECK(v <= 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(std::abs(frak_h(1.0, 0.2, 80).value - frak_h(1.0, 0.2, 120).value) <= 1e-8);
}

TEST_CASE("volume free energy") {
  CHECK(free_energy(2.0, 1.0) == 2.0);
  CHECK(free_energy(2.0, 3.0) == 3.0);
  CHECK(gamma_beta(1.0) > 1.0);
  const double f = free_energy_zero(1.0);
  CHECK(f > 1.0);
  const double v = f - 1.0;
  CHECK(std::abs(log_gamma_beta(1.0) - v + frak_h_auto(1.0, v)) <= 1e-8);
  // continuity across the glued boundary delta = f(beta, 0)
  for (double beta : {0.8, 1.0, 2.0}) {
    const double f0 = free_energy_zero(beta);
    CHECK(std::abs(free_energy(beta, f0 - 1e-10) - free_energy(beta, f0 + 1e-10)) <= 1e-9);
  }
}

TEST_CASE("phase classification") {
  const RegimePoint a = classify_phase(2.0, 0.0);
  CHECK(a.phase == Phase::Collapsed);
  REQUIRE(a.regime.has_value());
  CHECK(*a.regime == Regime::DC);
  CHECK(classify_phase(2.0, 2.5).phase == Phase::Glued);
  CHECK(!classify_phase(2.0, 2.5).regime.has_value());
  CHECK(0.5 <= free_energy_zero(1.0));
  CHECK(classify_phase(1.0, 0.5).phase == Phase::Extended);
  CHECK(classify_phase(1.0, 3.0).phase == Phase::Glued);
  CHECK(*classify_phase(2.0, 1.2).regime == Regime::AC);
  CHECK(*classify_phase(2.0, delta_c_explicit(2.0)).regime == Regime::Critical);
  CHECK(classify_phase(1.3, 1.25).in_good_set == false);
  CHECK(classify_phase(1.3, 0.5).in_good_set == true);
  CHECK_THROWS_AS(classify_phase(-1.0, 0.1), DomainError);
}

TEST_CASE("critical curve delta_c") {
  const double d3 = delta_c_explicit(3.0);
  CHECK(d3 > 0.0);
  CHECK(d3 < 1.5);
  CHECK(std::abs(delta_c_explicit(10.0) * std::exp(10.0) - 1.0) <= 0.01);
  const double x = std::exp(delta_c_explicit(2.0));
  CHECK(std::abs(x * x - 2 * std::cosh(2.0) * x + std::exp(2.0)) <= 1e-10);
  for (double beta : {1.3, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    const double dc = delta_c_explicit(beta);
    CHECK(std::abs(dc - delta_c_variational(beta)) <= 1e-8);
    CHECK(std::abs(dc + delta_check(beta) - beta) <= 1e-8);
    CHECK(dc < beta / 2);
    CHECK(std::abs(maximize_profile(beta, 0.0).stationarity) <= 1e-9);
  }
  double prev = delta_c_explicit(3.0);
  for (double beta : {4.0, 6.0, 8.0, 12.0}) {
    const double dc = delta_c_explicit(beta);
    CHECK(dc < prev);
    prev = dc;
  }
  CHECK_THROWS_AS(delta_c_explicit(1.0), DomainError);
}

TEST_CASE("delta_bar and beta_star") {
  CHECK(delta_bar(2.0) == 2.0);
  const double b = beta_c() + 0.03;
  const double db = delta_bar(b);
  CHECK(db >= b / 2);
  CHECK(db < b);
  double prev = -INFINITY;
  for (double d = 0.66; d < 1.3; d += 0.05) {
    const double v = delta_bar_sign_function(1.3, d);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(std::abs(delta_bar_sign_function(1.3, delta_bar(1.3))) <= 1e-7);
  const double bs = beta_star();
  CHECK(bs >= 1.42);
  CHECK(bs <= 1.52);
  CHECK(bs <= std::numbers::pi / std::sqrt(3.0) + 1e-6);
  CHECK(cbad_nonempty(bs - 0.01));
  CHECK(!cbad_nonempty(bs + 0.01));
}

TEST_CASE("surface free energy") {
  CHECK(surface_free_energy(2.0, 0.0) < 0.0);
  const double dc = delta_c_explicit(2.0);
  CHECK(std::abs(surface_free_energy(2.0, 0.5 * dc) - surface_free_energy(2.0, 0.0)) <= 1e-10);
  double prev = surface_free_energy(2.0, 0.0);
  for (double d = 0.1; d < 1.99; d += 0.1) {
    const double g = surface_free_energy(2.0, d);
    CHECK(g >= prev - 1e-12);
    prev = g;
  }
  CHECK(std::abs(surface_free_energy(2.0, dc - 1e-9) - surface_free_energy(2.0, dc + 1e-9)) <= 1e-8);
  CHECK_THROWS_AS(surface_free_energy(1.3, 1.25), RegimeError);
}

TEST_CASE("second-order transition constant") {
  const double dc = delta_c_explicit(2.0);
  const double g0 = surface_free_energy(2.0, dc);
  const double c = second_order_constant(2.0);
  CHECK(c > 0.0);
  const double eps = 1e-3;
  const double ratio = (surface_free_energy(2.0, dc + eps) - g0) / (eps * eps);
  CHECK(ratio == doctest::Approx(c).epsilon(0.01));
}

TEST_CASE("bead constants") {
  const BeadConstants b2 = bead_constants(2.0, 0.0);
  CHECK(b2.c0_in_unit_interval);
  CHECK(b2.diagnostic.empty());
  CHECK(b2.c0 > 0.0);
  CHECK(b2.c0 < 1.0);
  CHECK(std::cosh(b2.zeta) == doctest::Approx(std::exp(-1.0) * std::cosh(2.0)).epsilon(1e-14));
  CHECK(b2.c0_product == doctest::Approx(b2.c0_series).epsilon(1e-10));

  // R against the truncated exact series sum_L bar Z_L e^{-beta L}
  const BeadConstants b3 = bead_constants(3.0, 0.1);
  const std::vector<LogWeight> z = first_bead_Z(60, 3.0, 0.1);
  double series = 0.0;
  for (int L = 1; L <= 60; ++L) {
    if (!z[L].is_zero()) series += std::exp(z[L].log() - 3.0 * L);
  }
  CHECK(std::abs(series - b3.r) <= 1e-4);

  const BeadConstants inf = bead_constants(2.0, 1.95);
  CHECK(!inf.k_bar_finite);
  CHECK(std::isinf(inf.k_bar_delta));
  CHECK_THROWS_AS(bead_constants(1.0, 0.0), DomainError);
}

TEST_CASE("curve table and C_bad scan") {
  const std::vector<CurveRow> rows = critical_curves(1.0, 3.0, 0.25);
  REQUIRE(rows.size() == 9);
  for (const CurveRow& r : rows) {
    if (r.beta <= beta_c()) {
      CHECK(std::isnan(r.delta_c));
    } else {
      CHECK(std::abs(r.delta_c + r.delta_check - r.beta) <= 1e-8);
      CHECK(r.in_cbad_band == (r.beta < beta_star()));
    }
  }
  const std::vector<CbadSlice> s = c_bad_scan(1.25, 1.6, 0.05);
  CHECK(!s.empty());
  for (const CbadSlice& c : s) {
    CHECK(c.delta_lower < c.delta_upper);
    CHECK(c.beta < beta_star());
  }
}
