#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

using namespace ipdsaw;

namespace {

// Truncated direct sums over the untilted step law, independent of the
// closed forms under test.
struct SeriesMoments {
  double log_mgf, d1, d2;
};

SeriesMoments series_moments(double beta, double h, long K) {
  double z0 = 0.0, z1 = 0.0, z2 = 0.0;
  for (long k = -K; k <= K; ++k) {
    const double w = std::exp(h * k - beta * std::abs(k) / 2.0);
    z0 += w;
    z1 += k * w;
    z2 += static_cast<double>(k) * k * w;
  }
  double c = 0.0;
  for (long k = -K; k <= K; ++k) c += std::exp(-beta * std::abs(k) / 2.0);
  const double mean = z1 / z0;
  return {std::log(z0 / c), mean, z2 / z0 - mean * mean};
}

}  // namespace

TEST_CASE("c_beta and Gamma_beta closed forms") {
  for (double beta : {0.5, 1.0, 2.0, 7.0}) {
    const double r = std::exp(-beta / 2);
    CHECK(c_beta(beta) == doctest::Approx((1 + r) / (1 - r)).epsilon(1e-14));
    CHECK(gamma_beta(beta) == doctest::Approx(c_beta(beta) * std::exp(-beta)).epsilon(1e-14));
    CHECK(std::abs(gamma_beta(beta) / gamma_beta_quotient(beta) - 1.0) <= 1e-12);
    CHECK(log_gamma_beta(beta) == doctest::Approx(std::log(gamma_beta(beta))).epsilon(1e-13));
  }
  const WalkParams p = WalkParams::make(2.0);
  CHECK(p.c_beta == c_beta(2.0));
  CHECK(p.gamma_beta == gamma_beta(2.0));
  CHECK_THROWS_AS(c_beta(-1.0), DomainError);
}

TEST_CASE("log_mgf examples") {
  CHECK(log_mgf(2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_mgf(1.5, 0.3) == doctest::Approx(log_mgf(1.5, -0.3)).epsilon(1e-14));
  const SeriesMoments s = series_moments(2.0, 0.5, 200);
  CHECK(std::abs(log_mgf(2.0, 0.5) - s.log_mgf) <= 1e-13);
  CHECK_THROWS_AS(log_mgf(2.0, 1.0), DomainError);
}

TEST_CASE("log_mgf derivatives") {
  CHECK(log_mgf_d1(2.0, 0.0) == 0.0);
  const double e = 1e-6;
  const double fd1 = (log_mgf(2.0, 0.5 + e) - log_mgf(2.0, 0.5 - e)) / (2 * e);
  CHECK(std::abs(log_mgf_d1(2.0, 0.5) - fd1) <= 1e-6);
  const double fd2 = (log_mgf_d1(2.0, 0.4 + e) - log_mgf_d1(2.0, 0.4 - e)) / (2 * e);
  CHECK(std::abs(log_mgf_d2(2.0, 0.4) - fd2) <= 1e-5);
  CHECK(log_mgf_d2(2.0, 0.7) == doctest::Approx(log_mgf_d2(2.0, -0.7)).epsilon(1e-14));
  CHECK(log_mgf_d2(2.0, 0.0) > 0.0);

  // L' diverges as h approaches beta/2 from below
  double prev = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-4, 1e-6, 1e-9}) {
    const double v = log_mgf_d1(3.0, 1.5 - gap);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e8);
}

TEST_CASE("closed forms against truncated series on a grid") {
  for (double beta : {1.0, 2.0, 4.0}) {
    for (double frac : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
      const double h = frac * (beta / 2 - 0.05);
      const SeriesMoments s = series_moments(beta, h, oracle_truncation(beta, h));
      CHECK(std::abs(log_mgf(beta, h) - s.log_mgf) <= 1e-12);
      CHECK(std::abs(log_mgf_d1(beta, h) - s.d1) <= 1e-9 * std::max(1.0, std::abs(s.d1)));
      CHECK(std::abs(log_mgf_d2(beta, h) - s.d2) <= 1e-9 * std::max(1.0, s.d2));
      const double e = 1e-5;
      const double fd1 = (log_mgf(beta, h + e) - log_mgf(beta, h - e)) / (2 * e);
      const double fd2 = (log_mgf(beta, h + e) - 2 * log_mgf(beta, h) + log_mgf(beta, h - e)) / (e * e);
      CHECK(std::abs(log_mgf_d1(beta, h) - fd1) <= 1e-5 * std::max(1.0, std::abs(fd1)));
      CHECK(std::abs(log_mgf_d2(beta, h) - fd2) <= 1e-3 * std::max(1.0, fd2));
    }
  }
}

TEST_CASE("parity and convexity at random points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ub(0.3, 8.0), uf(-0.99, 0.99);
  for (int i = 0; i < 20; ++i) {
    const double beta = ub(rng);
    const double h = uf(rng) * beta / 2;
    CHECK(log_mgf(beta, h) == doctest::Approx(log_mgf(beta, -h)).epsilon(1e-12));
    CHECK(log_mgf_d1(beta, h) == doctest::Approx(-log_mgf_d1(beta, -h)).epsilon(1e-12));
    CHECK(log_mgf_d2(beta, h) == doctest::Approx(log_mgf_d2(beta, -h)).epsilon(1e-12));
    CHECK(log_mgf_d2(beta, h) > 0.0);
  }
}

TEST_CASE("tilted step law") {
  CHECK(step_pmf(2.0, 0.0, 0) == doctest::Approx(1.0 / c_beta(2.0)).epsilon(1e-14));
  double total = 0.0, mean = 0.0;
  for (long k = -200; k <= 200; ++k) {
    total += step_pmf(2.0, 0.3, k);
    mean += k * step_pmf(2.0, 0.3, k);
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(std::abs(mean - log_mgf_d1(2.0, 0.3)) <= 1e-10);
}

TEST_CASE("escape probability") {
  const double expected = 1.0 - (1.0 - std::exp(0.4 - 1.0)) / (1.0 - std::exp(-0.4 - 1.0));
  CHECK(escape_prob(2.0, 0.4, 0) == doctest::Approx(expected).epsilon(1e-14));
  double prev = -1.0;
  for (long x = 0; x <= 25; ++x) {
    const double k = escape_prob(2.0, 0.4, x);
    CHECK(k > prev);
    CHECK(k < 1.0);
    CHECK(k >= 0.0);
    prev = k;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-8));
  for (long x : {0L, 2L, 5L}) {
    double p = -1.0;
    for (double h : {0.1, 0.3, 0.5, 0.8}) {
      const double k = escape_prob(2.0, h, x);
      CHECK(k > p);
      p = k;
    }
  }
  CHECK_THROWS_AS(escape_prob(2.0, 0.0, 0), DomainError);
  CHECK_THROWS_AS(escape_prob(2.0, 0.4, -1), DomainError);
}

TEST_CASE("escape probability against simulation") {
  const double beta = 2.0, h = 0.4;
  Rng rng(99);
  const int runs = 20000, steps = 400;  // drift ~0.5 per step: survival decided long before
  int survived = 0;
  for (int r = 0; r < runs; ++r) {
    long x = 0;
    bool ok = true;
    for (int i = 0; i < steps && ok; ++i) {
      x += sample_step(beta, h, rng);
      ok = x > -3;
    }
    survived += ok;
  }
  const double p = escape_prob(beta, h, 3);
  const double phat = static_cast<double>(survived) / runs;
  const double se = std::sqrt(p * (1 - p) / runs);
  CHECK(std::abs(phat - p) <= 3 * se);
}

TEST_CASE("sample_step moments and symmetry") {
  Rng rng(12345);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(sample_step(2.0, 0.3, rng));
    sum += k;
    sum2 += k * k;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - log_mgf_d1(2.0, 0.3)) <= 4 * std::sqrt(var / n));

  std::vector<long> counts(7, 0);
  double s0 = 0.0, s02 = 0.0, s04 = 0.0;
  for (int i = 0; i < n; ++i) {
    const long k = sample_step(2.0, 0.0, rng);
    if (std::abs(k) <= 3) ++counts[static_cast<std::size_t>(k + 3)];
    const double kk = static_cast<double>(k);
    s0 += kk;
    s02 += kk * kk;
    s04 += kk * kk * kk * kk;
  }
  const double v0 = s02 / n - (s0 / n) * (s0 / n);
  const double v_se = std::sqrt((s04 / n - (s02 / n) * (s02 / n)) / n);
  CHECK(std::abs(v0 - log_mgf_d2(2.0, 0.0)) <= 4 * v_se);
  for (int k = 1; k <= 3; ++k) {
    const double a = static_cast<double>(counts[static_cast<std::size_t>(3 + k)]);
    const double b = static_cast<double>(counts[static_cast<std::size_t>(3 - k)]);
    CHECK(std::abs(a - b) <= 4 * std::sqrt(a + b));
  }
}

TEST_CASE("tilt schedules") {
  const TiltSchedule s = symmetric_schedule(2.0, 4, 1.6);
  REQUIRE(s.tilts.size() == 4);
  CHECK(s.tilts[0] == doctest::Approx(0.8 * (1 - 1.0 / 4)));
  CHECK(s.tilts[3] == doctest::Approx(0.8 * (1 - 7.0 / 4)));
  double mean = 0.0;
  for (double t : s.tilts) mean += t;
  CHECK(std::abs(mean) <= 1e-15);

  const TiltSchedule w = wall_schedule(2.0, 0.7, 5, 0.4);
  for (int k = 1; k <= 5; ++k) {
    CHECK(w.tilts[static_cast<std::size_t>(k - 1)] ==
          doctest::Approx(0.7 - 1.0 + 0.4 * (11.0 - 2 * k) / 10.0));
  }
  for (double t : w.tilts) CHECK(std::abs(t) < 1.0);
  CHECK_NOTHROW(symmetric_schedule(2.0, 2, 3.9));  // largest tilt 0.975 < 1
  CHECK_THROWS_AS(symmetric_schedule(2.0, 40, 3.9), DomainError);
}

TEST_CASE("tilt guard is configurable") {
  const double saved = tilt_guard();
  CHECK(saved == 1e-12);
  set_tilt_guard(1e-9);
  CHECK_THROWS_AS(log_mgf(2.0, 1.0 - 1e-10), DomainError);
  set_tilt_guard(saved);
  CHECK(std::isfinite(log_mgf(2.0, 1.0 - 1e-10)));
  CHECK_THROWS(set_tilt_guard(0.0));
}

TEST_CASE("Gamma equals one at beta_c") {
  CHECK(std::abs(gamma_beta(beta_c()) - 1.0) <= 1e-10);
}
