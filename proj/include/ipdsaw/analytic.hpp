#pragma once

#include <vector>

namespace ipdsaw {

// A solved tilt: value of h_tilde(q) or s_delta(q) with its residual
// (G'(value) - q or H'(value) - q) and the final bracket.
struct TiltSolution {
  double q = 0.0;
  double value = 0.0;
  double residual = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

enum class Branch { G, H };

struct PsiValue {
  double q = 0.0;
  double delta = 0.0;
  Branch branch = Branch::G;
  double value = 0.0;      // direct form  -q t + G(t)  or  -q t + H_delta(t)
  double ibp_value = 0.0;  // integrated-by-parts form  L(.) - 2 q t
  double dq = 0.0;         // d psi / dq = -tilt
  double tilt = 0.0;       // h_tilde(q) or s_delta(q)
};

struct ExtensionProfile {
  double beta = 0.0;
  double delta = 0.0;
  std::vector<double> a_grid;    // abscissae visited by the bracketing scan
  std::vector<double> t_prime;   // T' on a_grid
  double a_bar = 0.0;
  double q_bar = 0.0;            // a_bar^{-2}
  double max_value = 0.0;        // T_delta(a_bar)
  Branch branch = Branch::G;
  double tilt = 0.0;             // h_tilde(q_bar) or s_delta(q_bar)
  double stationarity = 0.0;     // T'(a_bar)
};

// G(h) = int_0^1 L(h(x-1/2)) dx and derivatives, |h| < beta.
double big_g(double beta, double h);
double big_g_prime(double beta, double h);
double big_g_second(double beta, double h);
// G_n(h) = (1/n) sum_k L((h/2)(1 - (2k-1)/n)).
double big_g_discrete(double beta, int n, double h);

// H_delta(s) = int_0^1 L(s x + delta - beta/2) dx and derivatives,
// s in (-delta, beta - delta).
double big_h(double beta, double delta, double s);
double big_h_prime(double beta, double delta, double s);
double big_h_second(double beta, double delta, double s);
// H_{n,delta}(s) = (1/n) sum_k L(delta - beta/2 + s (2n+1-2k)/(2n)).
double big_h_discrete(double beta, double delta, int n, double s);

// Inverse tilts: G'(h) = q on [0, beta) and H'_delta(s) = q on A_delta.
TiltSolution h_tilde(double beta, double q);
TiltSolution s_delta(double beta, double delta, double q);

double delta0(double beta, double q);
// Largest q on the G-branch for this delta (+inf at delta = 0, 0 for
// delta >= beta/2).
double q_delta_threshold(double beta, double delta);
double q_star(double beta, double delta);

PsiValue psi(double beta, double delta, double q);

// Extension profile T_delta(a) = a log Gamma + a psi(1/a^2, delta).
double profile_T(double beta, double delta, double a);
double profile_T_d1(double beta, double delta, double a);
double profile_T_d2(double beta, double delta, double a);

// Unique maximiser of T_delta for (beta, delta) in C_good with beta > beta_c.
ExtensionProfile maximize_profile(double beta, double delta);

// Prefactor ingredients.
double prefactor_theta(double beta, double h);
double prefactor_b(double beta, double h);
double prefactor_c(double beta, double delta, double s);

struct GaussHessian {
  double h = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double det = 0.0;
};

// Entries of B(h_tilde(q)) from the closed forms.
GaussHessian gauss_hessian(double beta, double q);
// Same entries by direct quadrature of int L'', int x L'', int x^2 L''.
GaussHessian gauss_hessian_quadrature(double beta, double q);
double gauss_density_fh(double beta, double q, double z1, double z2);

// Prefactors of the three sharp-asymptotic regimes of D_N(q, delta).
double prefactor_subcrit(double beta, double q, double delta);
double prefactor_crit(double beta, double q, double c_shift);
// Returns the full AC prefactor kappa^0(h) xi(q, delta) with
// h = s_delta(q) + delta - beta/2.
double prefactor_supcrit(double beta, double delta, double q);
double xi_supcrit(double beta, double delta, double q);

// Limit of [psi(q, delta0(q) + eps) - psi(q, 0)] / eps^2 as eps -> 0.
double transition_gap_constant(double beta, double q);
// The same expression without the h_tilde(q) factor in the denominator, kept
// for comparison against the numerical limit.
double transition_gap_constant_alt(double beta, double q);

namespace detail {
// H'_delta(s) without domain checks; valid up to delta = beta where the
// integrand stays integrable.
double big_h_prime_edge(double beta, double delta, double s);
// L'(h/2) evaluated through the gap to the singular edge.
double l1_at_half(double beta, double h);
}  // namespace detail

}  // namespace ipdsaw
