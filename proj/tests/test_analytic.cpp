#include <cmath>
#include <vector>

#include "doctest.h"

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

using namespace ipdsaw;

namespace {

// Midpoint rule with one Richardson step; smooth integrands only.
template <class F>
double midpoint_oracle(F f, int n) {
  auto mid = [&](int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += f((i + 0.5) / m);
    return s / m;
  };
  return (4.0 * mid(2 * n) - mid(n)) / 3.0;
}

}  // namespace

TEST_CASE("G examples") {
  CHECK(big_g(2.0, 0.0) == 0.0);
  CHECK(big_g(2.0, 1.3) == doctest::Approx(big_g(2.0, -1.3)).epsilon(1e-13));
  const double oracle = midpoint_oracle([](double x) { return log_mgf(2.0, x - 0.5); }, 10000);
  CHECK(std::abs(big_g(2.0, 1.0) - oracle) <= 1e-9);
  CHECK_THROWS_AS(big_g(2.0, 2.0), DomainError);
}

TEST_CASE("G' examples") {
  CHECK(big_g_prime(2.0, 0.0) == 0.0);
  const double e = 1e-5;
  const double fd = (big_g(2.0, 0.8 + e) - big_g(2.0, 0.8 - e)) / (2 * e);
  CHECK(std::abs(big_g_prime(2.0, 0.8) - fd) <= 1e-6);
  for (double h = 0.1; h < 1.95; h += 0.2) CHECK(big_g_prime(2.0, h) > 0.0);
  const double fd2 = (big_g_prime(2.0, 0.8 + e) - big_g_prime(2.0, 0.8 - e)) / (2 * e);
  CHECK(std::abs(big_g_second(2.0, 0.8) - fd2) <= 1e-6);
}

TEST_CASE("discrete G") {
  CHECK(big_g_discrete(2.0, 2, 0.0) == 0.0);
  const double hand = (log_mgf(2.0, 0.45 * (1 - 1.0 / 3)) + log_mgf(2.0, 0.45 * (1 - 3.0 / 3)) +
                       log_mgf(2.0, 0.45 * (1 - 5.0 / 3))) / 3.0;
  CHECK(big_g_discrete(2.0, 3, 0.9) == doctest::Approx(hand).epsilon(1e-14));
  const double g = big_g(2.0, 1.0);
  const double e50 = std::abs(big_g_discrete(2.0, 50, 1.0) - g);
  const double e100 = std::abs(big_g_discrete(2.0, 100, 1.0) - g);
  const double e200 = std::abs(big_g_discrete(2.0, 200, 1.0) - g);
  CHECK(e50 / e100 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e100 / e200 == doctest::Approx(4.0).epsilon(0.1));
  CHECK_THROWS_AS(big_g_discrete(2.0, 1, 0.5), DomainError);
}

TEST_CASE("H examples") {
  CHECK(big_h(2.0, 0.7, 0.0) == doctest::Approx(log_mgf(2.0, -0.3)).epsilon(1e-14));
  const double oracle = midpoint_oracle([](double x) { return log_mgf(2.0, 0.5 * x + 0.7 - 1.0); }, 10000);
  CHECK(std::abs(big_h(2.0, 0.7, 0.5) - oracle) <= 1e-9);

  // H_delta(s) <= (1/|s|) int_{-beta/2}^{beta/2} L, since L >= 0
  const double beta = 2.0, delta = 0.7;
  const double l_int = 2.0 * numerics::integrate(
                                 [&](double u) { return detail::lmgf_gap(beta, u, beta - u); }, 0.0, 1.0);
  for (int i = 1; i < 100; ++i) {
    const double s = -delta + i * (beta / 100.0);
    if (std::abs(s) < 1e-12) continue;
    CHECK(big_h(beta, delta, s) <= l_int / std::abs(s));
  }
  CHECK_THROWS_AS(big_h(2.0, 0.7, 1.4), DomainError);
  CHECK_THROWS_AS(big_h(2.0, 2.0, 0.0), DomainError);
}

TEST_CASE("H' examples") {
  CHECK(big_h_prime(2.0, 0.6, 1.0 - 0.6) < 0.0);
  CHECK(big_h_prime(2.0, 1.4, 1.0 - 1.4) > 0.0);
  CHECK(std::abs(big_h_prime(2.0, 1.0, 0.0)) <= 1e-15);
  const double e = 1e-5;
  for (double s : {-0.3, 0.2, 0.9}) {
    const double fd = (big_h(2.0, 0.7, s + e) - big_h(2.0, 0.7, s - e)) / (2 * e);
    CHECK(std::abs(big_h_prime(2.0, 0.7, s) - fd) <= 1e-6);
    const double fd2 = (big_h_prime(2.0, 0.7, s + e) - big_h_prime(2.0, 0.7, s - e)) / (2 * e);
    CHECK(std::abs(big_h_second(2.0, 0.7, s) - fd2) <= 1e-6);
  }
}

TEST_CASE("discrete H") {
  const double hand = 0.5 * (log_mgf(2.0, 0.7 - 1.0 + 0.4 * 0.75) + log_mgf(2.0, 0.7 - 1.0 + 0.4 * 0.25));
  CHECK(big_h_discrete(2.0, 0.7, 2, 0.4) == doctest::Approx(hand).epsilon(1e-14));
  for (int n : {1, 5, 40}) CHECK(big_h_discrete(2.0, 0.7, n, 0.0) == doctest::Approx(log_mgf(2.0, -0.3)).epsilon(1e-14));
  const double h = big_h(2.0, 0.7, 0.4);
  const double e50 = std::abs(big_h_discrete(2.0, 0.7, 50, 0.4) - h);
  const double e100 = std::abs(big_h_discrete(2.0, 0.7, 100, 0.4) - h);
  CHECK(e50 / e100 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("inverse tilts") {
  CHECK(h_tilde(2.0, 0.0).value == 0.0);
  for (double q : {0.3, 1.0, 3.0}) {
    const TiltSolution t = h_tilde(2.0, q);
    CHECK(std::abs(big_g_prime(2.0, t.value) - q) <= 1e-10);
  }
  CHECK(h_tilde(2.0, 1.0).value < h_tilde(2.0, 2.0).value);

  CHECK(s_delta(2.0, 1.0, 0.0).value == doctest::Approx(0.0).epsilon(1e-12));
  const TiltSolution s = s_delta(2.0, 0.7, 1.0);
  CHECK(std::abs(big_h_prime(2.0, 0.7, s.value) - 1.0) <= 1e-10);

  const double qd = q_delta_threshold(2.0, 0.6);
  CHECK(h_tilde(2.0, qd).value == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(s_delta(2.0, 0.6, qd).value == doctest::Approx(0.8).epsilon(1e-9));
  CHECK_THROWS_AS(h_tilde(2.0, -1.0), DomainError);
}

TEST_CASE("thresholds") {
  CHECK(q_delta_threshold(2.0, 1.0) == 0.0);
  CHECK(std::isinf(q_delta_threshold(2.0, 0.0)));
  double prev = q_delta_threshold(2.0, 0.9);
  CHECK(prev < 0.05);
  for (double d : {0.95, 0.99, 0.999}) {
    const double q = q_delta_threshold(2.0, d);
    CHECK(q < prev);
    prev = q;
  }
  for (double q : {0.2, 1.0, 2.5}) {
    CHECK(delta0(2.0, q) == doctest::Approx(1.0 - h_tilde(2.0, q).value / 2).epsilon(1e-14));
    CHECK(q_delta_threshold(2.0, delta0(2.0, q)) == doctest::Approx(q).epsilon(1e-8));
  }

  CHECK(q_star(2.0, 0.6) == 0.0);
  const double qs = q_star(2.0, 1.4);
  CHECK(qs > 0.0);
  CHECK(std::abs(big_h_prime(2.0, 1.4, 1.0 - 1.4) - qs) <= 1e-10);
  CHECK(std::abs(s_delta(2.0, 1.4, qs).value + 1.4 - 1.0) <= 1e-9);
}

TEST_CASE("psi branches") {
  const double q = 1.0;
  const double d0 = delta0(2.0, q);
  CHECK(psi(2.0, d0 / 2, q).value == psi(2.0, 0.0, q).value);
  CHECK(psi(2.0, d0 / 2, q).branch == Branch::G);
  for (double qq = 0.05; qq < 3.0; qq += 0.25) {
    if (0.9 > delta0(2.0, qq)) CHECK(psi(2.0, 0.9, qq).value > psi(2.0, 0.0, qq).value);
  }
  // C^1 gluing at q_delta, from the exact one-sided derivatives
  const double qd = q_delta_threshold(2.0, 0.6);
  CHECK(std::abs(h_tilde(2.0, qd).value - s_delta(2.0, 0.6, qd).value) <= 1e-8);
  const PsiValue l = psi(2.0, 0.6, qd * (1 - 1e-9));
  const PsiValue r = psi(2.0, 0.6, qd * (1 + 1e-9));
  CHECK(l.branch == Branch::G);
  CHECK(r.branch == Branch::H);
  CHECK(std::abs(l.dq - r.dq) <= 1e-7);
  CHECK(std::abs(l.value - r.value) <= 1e-8);
  CHECK_THROWS_AS(psi(2.0, 0.5, 0.0), DomainError);
}

TEST_CASE("integration by parts and round trips on a grid") {
  double worst = 0.0;
  int points = 0;
  for (double beta : {1.3, 1.8, 2.5, 4.0, 6.0}) {
    for (double q : {0.1, 0.4, 1.0, 2.0, 4.0}) {
      const double h = h_tilde(beta, q).value;
      // within 1e-6 of beta the double spacing of h alone moves G' by more than 1e-9
      if (beta - h < 1e-6) continue;
      ++points;
      worst = std::max(worst, std::abs(big_g(beta, h) - (log_mgf(beta, h / 2) - q * h)));
      worst = std::max(worst, std::abs(big_g_prime(beta, h) - q));
      for (double frac : {0.3, 0.75}) {
        const double delta = frac * beta;
        const double s = s_delta(beta, delta, q).value;
        worst = std::max(worst, std::abs(big_h(beta, delta, s) - (log_mgf(beta, s + delta - beta / 2) - q * s)));
        worst = std::max(worst, std::abs(big_h_prime(beta, delta, s) - q));
      }
    }
  }
  CHECK(worst <= 1e-9);
  CHECK(points >= 20);
}

TEST_CASE("extension profile T") {
  const double e = 1e-5;
  const double fd = (profile_T(2.0, 0.3, 1.0 + e) - profile_T(2.0, 0.3, 1.0 - e)) / (2 * e);
  CHECK(std::abs(profile_T_d1(2.0, 0.3, 1.0) - fd) <= 1e-6);
  const double fd2 = (profile_T_d1(2.0, 0.3, 1.0 + e) - profile_T_d1(2.0, 0.3, 1.0 - e)) / (2 * e);
  CHECK(std::abs(profile_T_d2(2.0, 0.3, 1.0) - fd2) <= 1e-5);

  const double qs = q_star(2.0, 1.4);
  for (double q = qs + 0.05; q < 4.0; q += 0.3) {
    const double s = s_delta(2.0, 1.4, q).value;
    const double t2 = profile_T_d2(2.0, 1.4, 1.0 / std::sqrt(q));
    CHECK(t2 * (1.4 - 1.0 + s) < 0.0);
  }
  for (double delta : {0.0, 0.5, 1.0}) {
    for (double a = 0.4; a < 6.0; a += 0.4) CHECK(profile_T_d2(2.0, delta, a) < 0.0);
  }
  // T and T' are continuous across the branch switch
  const double qd = q_delta_threshold(2.0, 0.6);
  const double a = 1.0 / std::sqrt(qd);
  const double da = 1e-9 * a;
  CHECK(std::abs(profile_T(2.0, 0.6, a - da) - profile_T(2.0, 0.6, a + da)) <= 1e-8);
  CHECK(std::abs(profile_T_d1(2.0, 0.6, a - da) - profile_T_d1(2.0, 0.6, a + da)) <= 1e-7);
}

TEST_CASE("maximize_profile") {
  const ExtensionProfile p0 = maximize_profile(2.0, 0.0);
  CHECK(p0.max_value < 0.0);
  CHECK(p0.branch == Branch::G);
  CHECK(std::abs(log_gamma_beta(2.0) + log_mgf(2.0, p0.tilt / 2)) <= 1e-9);
  const double dc = delta_c_explicit(2.0);
  const ExtensionProfile ph = maximize_profile(2.0, dc / 2);
  CHECK(ph.a_bar == doctest::Approx(p0.a_bar).epsilon(1e-10));
  const ExtensionProfile pa = maximize_profile(2.0, 1.2);
  CHECK(pa.branch == Branch::H);
  CHECK(std::abs(log_gamma_beta(2.0) + log_mgf(2.0, pa.tilt + 1.2 - 1.0)) <= 1e-9);
  CHECK(pa.max_value > p0.max_value);
  const ExtensionProfile p20 = maximize_profile(20.0, 0.0);
  CHECK(std::abs(p20.q_bar - 1.0) <= 0.02);
  CHECK_THROWS_AS(maximize_profile(1.0, 0.0), RegimeError);
  CHECK_THROWS_AS(maximize_profile(1.3, 1.2), RegimeError);
}

TEST_CASE("Gaussian local limit density") {
  const GaussHessian g = gauss_hessian(2.0, 1.0);
  const GaussHessian gq = gauss_hessian_quadrature(2.0, 1.0);
  CHECK(std::abs(g.alpha0 - gq.alpha0) <= 1e-8);
  CHECK(std::abs(g.alpha1 - gq.alpha1) <= 1e-8);
  CHECK(std::abs(g.alpha2 - gq.alpha2) <= 1e-8);
  for (double beta : {1.5, 2.0, 4.0}) {
    for (double q : {0.1, 1.0, 5.0}) CHECK(gauss_hessian(beta, q).det > 0.0);
  }
  const double r1 = 9.0 * std::sqrt(g.alpha2), r2 = 9.0 * std::sqrt(g.alpha0);
  const double mass = numerics::integrate(
      [&](double z1) {
        return numerics::integrate([&](double z2) { return gauss_density_fh(2.0, 1.0, z1, z2); },
                                   -r2, r2, 1e-10);
      },
      -r1, r1, 1e-9);
  CHECK(std::abs(mass - 1.0) <= 1e-4);
  CHECK(prefactor_theta(2.0, g.h) == doctest::Approx(gq.det).epsilon(1e-9));
  CHECK(prefactor_b(2.0, g.h) == doctest::Approx(big_g_second(2.0, g.h)).epsilon(1e-14));
}

TEST_CASE("sharp-asymptotic prefactors") {
  const double d0 = delta0(2.0, 1.0);
  CHECK(prefactor_subcrit(2.0, 1.0, 0.0) > 0.0);
  CHECK_THROWS_AS(prefactor_subcrit(2.0, 1.0, d0 + 0.01), RegimeError);
  CHECK(prefactor_crit(2.0, 1.0, 0.0) > 0.0);
  // the Gaussian marginal integrates to kappa / 2 over the shift
  const double kappa = escape_prob(2.0, h_tilde(2.0, 1.0).value / 2, 0);
  const double total = numerics::integrate_half_line(
      [](double c) { return prefactor_crit(2.0, 1.0, c) + prefactor_crit(2.0, 1.0, -c); }, 0.0, 1e-10);
  CHECK(total == doctest::Approx(kappa / 2).epsilon(1e-8));
  CHECK(prefactor_supcrit(2.0, 1.2, 1.0) > 0.0);
  CHECK(xi_supcrit(2.0, 1.2, 1.0) > 0.0);
  CHECK_THROWS_AS(prefactor_supcrit(2.0, 0.0, 1.0), DomainError);
}

TEST_CASE("transition gap constant") {
  for (double q : {0.5, 1.0, 2.0}) {
    const double d0 = delta0(2.0, q);
    const double base = psi(2.0, 0.0, q).value;
    auto ratio = [&](double eps) { return (psi(2.0, d0 + eps, q).value - base) / (eps * eps); };
    const double c = transition_gap_constant(2.0, q);
    double prev_gap = INFINITY;
    for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      const double gap = std::abs(ratio(eps) - c);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap / c <= 0.01);
    CHECK(std::abs(ratio(1e-4) - transition_gap_constant_alt(2.0, q)) / c > 0.5);
    const double h = h_tilde(2.0, q).value;
    CHECK(detail::l1_at_half(2.0, h) > 4 * q);
  }
}
