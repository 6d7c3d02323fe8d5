#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ipdsaw {

// Tilts closer than tilt_guard() to the edge of (-beta/2, beta/2) are rejected
// by the public entry points. The default 1e-12 keeps the maximiser of the
// extension profile representable up to beta of about 25; the setter is meant
// for start-up configuration, not for concurrent use.
double tilt_guard();
void set_tilt_guard(double guard);

using Rng = std::mt19937_64;

// The discrete Laplace step law P_beta(k) = exp(-beta |k| / 2) / c_beta.
struct WalkParams {
  double beta = 0.0;
  double c_beta = 0.0;
  double gamma_beta = 0.0;

  static WalkParams make(double beta);
};

double c_beta(double beta);
double gamma_beta(double beta);
// Quotient form (e^-b + e^-3b/2) / (1 - e^-b/2); kept separate so tests can
// compare the two expressions.
double gamma_beta_quotient(double beta);
double log_gamma_beta(double beta);

// Log-moment generating function L(h) = log E[exp(h X_1)] and its first two
// derivatives, for |h| < beta/2 - tilt_guard().
double log_mgf(double beta, double h);
double log_mgf_d1(double beta, double h);
double log_mgf_d2(double beta, double h);

// Tilted law exp(h k - L(h)) P_beta(k).
double step_pmf(double beta, double h, long k);

// kappa^x(h): probability that the h-tilted walk never goes to or below -x.
// Requires 0 < h < beta/2 and x >= 0.
double escape_prob(double beta, double h, long x);

// Draw from step_pmf(beta, tilt, .) by inverting the two geometric tails.
long sample_step(double beta, double tilt, Rng& rng);

// Number of terms on each side making the truncated oracle series of the
// tilted law accurate to ~1e-15.
long oracle_truncation(double beta, double h);

// Per-increment tilts of the inhomogeneous changes of measure.
struct TiltSchedule {
  int n = 0;
  std::vector<double> tilts;
};

// Symmetric schedule t_k = (h/2)(1 - (2k-1)/n), k = 1..n.
TiltSchedule symmetric_schedule(double beta, int n, double h);

// Wall schedule t_k = delta - beta/2 + s (2n+1-2k)/(2n), k = 1..n.
TiltSchedule wall_schedule(double beta, double delta, int n, double s);

namespace detail {
// The same functions expressed through the distances to the two singular
// points: ep = beta/2 - h and em = beta/2 + h (both > 0). These keep full
// relative accuracy when h is within rounding distance of +-beta/2 and are
// what the quadrature integrands call.
double lmgf_gap(double beta, double ep, double em);
double lmgf_d1_gap(double ep, double em);
double lmgf_d2_gap(double ep, double em);
void check_tilt(double beta, double h);
}  // namespace detail

}  // namespace ipdsaw
