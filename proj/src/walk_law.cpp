#include "ipdsaw/walk_law.hpp"

#include <cmath>
#include <string>

#include "ipdsaw/numerics.hpp"

namespace ipdsaw {

namespace {

double g_tilt_guard = 1e-12;

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be a positive finite number, got " + std::to_string(beta));
  }
}

// 1 - exp(-x) without cancellation.
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace

double tilt_guard() { return g_tilt_guard; }

void set_tilt_guard(double guard) {
  if (!(guard > 0.0 && guard < 0.1)) throw DomainError("tilt guard must lie in (0, 0.1)");
  g_tilt_guard = guard;
}

WalkParams WalkParams::make(double beta) {
  check_beta(beta);
  return {beta, ipdsaw::c_beta(beta), ipdsaw::gamma_beta(beta)};
}

double c_beta(double beta) {
  check_beta(beta);
  return (1.0 + std::exp(-beta / 2)) / one_minus_exp_neg(beta / 2);
}

double gamma_beta(double beta) { return c_beta(beta) * std::exp(-beta); }

double gamma_beta_quotient(double beta) {
  check_beta(beta);
  return (std::exp(-beta) + std::exp(-1.5 * beta)) / one_minus_exp_neg(beta / 2);
}

double log_gamma_beta(double beta) {
  check_beta(beta);
  return std::log1p(std::exp(-beta / 2)) - std::log(one_minus_exp_neg(beta / 2)) - beta;
}

namespace detail {

void check_tilt(double beta, double h) {
  check_beta(beta);
  if (!(std::abs(h) < beta / 2 - tilt_guard())) {
    throw DomainError("tilt " + std::to_string(h) + " outside (-beta/2, beta/2) for beta=" +
                      std::to_string(beta));
  }
}

// With a = e^{h-b/2}, b = e^{-h-b/2} the generating function is
// (1-e^{-beta/2})^2 / ((1-a)(1-b)), hence the three expressions below.
double lmgf_gap(double beta, double ep, double em) {
  return 2.0 * std::log(one_minus_exp_neg(beta / 2)) - std::log(one_minus_exp_neg(ep)) -
         std::log(one_minus_exp_neg(em));
}

double lmgf_d1_gap(double ep, double em) { return 1.0 / std::expm1(ep) - 1.0 / std::expm1(em); }

double lmgf_d2_gap(double ep, double em) {
  auto term = [](double e) {
    const double u = one_minus_exp_neg(e);
    return std::exp(-e) / (u * u);
  };
  return term(ep) + term(em);
}

}  // namespace detail

double log_mgf(double beta, double h) {
  detail::check_tilt(beta, h);
  return detail::lmgf_gap(beta, beta / 2 - h, beta / 2 + h);
}

double log_mgf_d1(double beta, double h) {
  detail::check_tilt(beta, h);
  return detail::lmgf_d1_gap(beta / 2 - h, beta / 2 + h);
}

double log_mgf_d2(double beta, double h) {
  detail::check_tilt(beta, h);
  return detail::lmgf_d2_gap(beta / 2 - h, beta / 2 + h);
}

double step_pmf(double beta, double h, long k) {
  const double l = log_mgf(beta, h);
  const double kk = static_cast<double>(k);
  return std::exp(h * kk - l - beta * std::abs(kk) / 2) / c_beta(beta);
}

double escape_prob(double beta, double h, long x) {
  check_beta(beta);
  if (!(h > 0.0) || !(h < beta / 2 - tilt_guard())) {
    throw DomainError("escape probability needs 0 < h < beta/2, got h=" + std::to_string(h));
  }
  if (x < 0) throw DomainError("escape probability needs x >= 0");
  const double ratio = one_minus_exp_neg(beta / 2 - h) / one_minus_exp_neg(beta / 2 + h);
  return 1.0 - std::exp(-2.0 * h * static_cast<double>(x)) * ratio;
}

long sample_step(double beta, double tilt, Rng& rng) {
  detail::check_tilt(beta, tilt);
  const double ep = beta / 2 - tilt;  // positive tail ratio a = e^{-ep}
  const double em = beta / 2 + tilt;  // negative tail ratio b = e^{-em}
  const double w_pos = 1.0 / std::expm1(ep);  // sum_{k>=1} a^k
  const double w_neg = 1.0 / std::expm1(em);
  const double total = 1.0 + w_pos + w_neg;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng) * total;
  if (u < 1.0) return 0;
  // P(K >= j + 1 | K >= 1) = a^j, so K = 1 + floor(log V / log a).
  const double v = 1.0 - unif(rng);  // in (0, 1]
  if (u < 1.0 + w_pos) return 1 + static_cast<long>(std::floor(-std::log(v) / ep));
  return -1 - static_cast<long>(std::floor(-std::log(v) / em));
}

long oracle_truncation(double beta, double h) {
  const double gap = beta / 2 - std::abs(h);
  return std::max(200L, static_cast<long>(std::ceil(40.0 / gap)));
}

TiltSchedule symmetric_schedule(double beta, int n, double h) {
  if (n < 1) throw DomainError("schedule length must be positive");
  TiltSchedule s{n, std::vector<double>(static_cast<std::size_t>(n))};
  for (int k = 1; k <= n; ++k) {
    const double t = (h / 2) * (1.0 - (2.0 * k - 1.0) / n);
    detail::check_tilt(beta, t);
    s.tilts[static_cast<std::size_t>(k - 1)] = t;
  }
  return s;
}

TiltSchedule wall_schedule(double beta, double delta, int n, double s) {
  if (n < 1) throw DomainError("schedule length must be positive");
  TiltSchedule out{n, std::vector<double>(static_cast<std::size_t>(n))};
  for (int k = 1; k <= n; ++k) {
    const double t = delta - beta / 2 + s * (2.0 * n + 1.0 - 2.0 * k) / (2.0 * n);
    detail::check_tilt(beta, t);
    out.tilts[static_cast<std::size_t>(k - 1)] = t;
  }
  return out;
}

}  // namespace ipdsaw
