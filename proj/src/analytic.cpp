#include "ipdsaw/analytic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

using detail::lmgf_d1_gap;
using detail::lmgf_d2_gap;
using detail::lmgf_gap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be a positive finite number");
  }
}

void check_g_arg(double beta, double h) {
  check_beta(beta);
  if (!(std::abs(h) < beta - 2 * tilt_guard())) {
    throw DomainError("G needs |h| < beta, got h=" + std::to_string(h));
  }
}

void check_h_arg(double beta, double delta, double s) {
  check_beta(beta);
  if (!(delta >= 0.0 && delta < beta)) {
    throw DomainError("H_delta needs 0 <= delta < beta, got delta=" + std::to_string(delta));
  }
  if (!(s > -delta + tilt_guard() && s < beta - delta - tilt_guard())) {
    throw DomainError("H_delta needs s in (-delta, beta-delta), got s=" + std::to_string(s));
  }
}

struct Gaps {
  double ep;  // beta/2 - argument
  double em;  // beta/2 + argument
};

// Gaps for the argument h(x - 1/2); the edge that approaches the singular point
// is formed from (beta - |h|) and the distance of x to 0 or 1. The caller
// passes x and xc = 1 - x, each carried with full relative precision on the
// half of [0, 1] where it is small.
Gaps centered_gaps(double beta, double h, double x, double xc) {
  const double y = x - 0.5;
  const double edge = (y >= 0) ? xc : x;
  const double ah = std::abs(h);
  const double near = 0.5 * (beta - ah) + ah * edge;
  const double far = 0.5 * beta + std::abs(h * y);
  if (h * y >= 0) return {near, far};
  return {far, near};
}

// Gaps for the argument s x + delta - beta/2.
Gaps wall_gaps(double beta, double delta, double s, double x, double xc) {
  if (s >= 0) return {(beta - delta - s) + s * xc, delta + s * x};
  return {(beta - delta) - s * x, (delta + s) + (-s) * xc};
}

// int_0^1 f(x, 1 - x) dx, with the upper half integrated in u = 1 - x so that
// both endpoints are approached through a variable that is exact near zero.
double integrate_unit(const std::function<double(double, double)>& f) {
  return numerics::integrate([&](double x) { return f(x, 1.0 - x); }, 0.0, 0.5) +
         numerics::integrate([&](double u) { return f(1.0 - u, u); }, 0.0, 0.5);
}

// int_0^1 w(x) F(h(x-1/2)) dx with w in {1, x, x^2, x-1/2, (x-1/2)^2}.
enum class Weight { One, X, X2, Centered, Centered2 };

double weight(Weight w, double x) {
  switch (w) {
    case Weight::One: return 1.0;
    case Weight::X: return x;
    case Weight::X2: return x * x;
    case Weight::Centered: return x - 0.5;
    case Weight::Centered2: return (x - 0.5) * (x - 0.5);
  }
  return 0.0;
}

enum class Deriv { L0, L1, L2 };

double eval_gap(double beta, Deriv d, Gaps g) {
  switch (d) {
    case Deriv::L0: return lmgf_gap(beta, g.ep, g.em);
    case Deriv::L1: return lmgf_d1_gap(g.ep, g.em);
    case Deriv::L2: return lmgf_d2_gap(g.ep, g.em);
  }
  return 0.0;
}

double centered_moment(double beta, double h, Deriv d, Weight w) {
  return integrate_unit([&](double x, double xc) {
    return weight(w, x) * eval_gap(beta, d, centered_gaps(beta, h, x, xc));
  });
}

double wall_moment(double beta, double delta, double s, Deriv d, Weight w) {
  return integrate_unit([&](double x, double xc) {
    return weight(w, x) * eval_gap(beta, d, wall_gaps(beta, delta, s, x, xc));
  });
}

double g_prime_raw(double beta, double h) {
  if (h == 0.0) return 0.0;
  return centered_moment(beta, h, Deriv::L1, Weight::Centered);
}

double h_prime_raw(double beta, double delta, double s) {
  return wall_moment(beta, delta, s, Deriv::L1, Weight::X);
}

// L(h_tilde/2) and L'(h_tilde/2) with full accuracy near the singular edge.
double l_half(double beta, double h) { return lmgf_gap(beta, 0.5 * (beta - h), 0.5 * (beta + h)); }
double l1_half(double beta, double h) { return lmgf_d1_gap(0.5 * (beta - h), 0.5 * (beta + h)); }

// L(s + delta - beta/2) and L' at the same point.
double l_wall_end(double beta, double delta, double s) {
  return lmgf_gap(beta, beta - delta - s, delta + s);
}

}  // namespace

double big_g(double beta, double h) {
  check_g_arg(beta, h);
  if (h == 0.0) return 0.0;
  return centered_moment(beta, h, Deriv::L0, Weight::One);
}

double big_g_prime(double beta, double h) {
  check_g_arg(beta, h);
  return g_prime_raw(beta, h);
}

double big_g_second(double beta, double h) {
  check_g_arg(beta, h);
  return centered_moment(beta, h, Deriv::L2, Weight::Centered2);
}

double big_g_discrete(double beta, int n, double h) {
  if (n < 2) throw DomainError("G_n needs n >= 2");
  const TiltSchedule sch = symmetric_schedule(beta, n, h);
  double sum = 0.0;
  for (double t : sch.tilts) sum += log_mgf(beta, t);
  return sum / n;
}

double big_h(double beta, double delta, double s) {
  check_h_arg(beta, delta, s);
  return wall_moment(beta, delta, s, Deriv::L0, Weight::One);
}

double big_h_prime(double beta, double delta, double s) {
  check_h_arg(beta, delta, s);
  return h_prime_raw(beta, delta, s);
}

double big_h_second(double beta, double delta, double s) {
  check_h_arg(beta, delta, s);
  return wall_moment(beta, delta, s, Deriv::L2, Weight::X2);
}

double big_h_discrete(double beta, double delta, int n, double s) {
  if (n < 1) throw DomainError("H_n needs n >= 1");
  const TiltSchedule sch = wall_schedule(beta, delta, n, s);
  double sum = 0.0;
  for (double t : sch.tilts) sum += log_mgf(beta, t);
  return sum / n;
}

TiltSolution h_tilde(double beta, double q) {
  check_beta(beta);
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("h_tilde needs finite q >= 0");
  if (q == 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0};
  auto f = [&](double h) { return g_prime_raw(beta, h) - q; };
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int k = 1; k < 64; ++k) {
    hi = beta * (1.0 - std::ldexp(1.0, -k));
    if (beta - hi < 4 * tilt_guard()) break;
    if (f(hi) >= 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
  }
  if (!bracketed) {
    throw ConvergenceError("h_tilde: G' stays below q=" + std::to_string(q) +
                           " up to the guard band");
  }
  const numerics::RootResult r = numerics::solve_bracketed(f, lo, hi, 1e-13);
  return {q, r.x, r.residual, r.lo, r.hi};
}

TiltSolution s_delta(double beta, double delta, double q) {
  check_beta(beta);
  if (!(delta > 0.0 && delta < beta)) throw DomainError("s_delta needs 0 < delta < beta");
  if (!std::isfinite(q)) throw DomainError("s_delta needs finite q");
  const double left = -delta, right = beta - delta;
  const double mid = beta / 2 - delta;
  auto f = [&](double s) { return h_prime_raw(beta, delta, s) - q; };
  const double fmid = f(mid);
  if (fmid == 0.0) return {q, mid, 0.0, mid, mid};
  double lo = mid, hi = mid;
  bool bracketed = false;
  for (int k = 1; k < 64; ++k) {
    if (fmid < 0) {
      hi = mid + (right - mid) * (1.0 - std::ldexp(1.0, -k));
      if (right - hi < 2 * tilt_guard()) break;
      if (f(hi) >= 0.0) {
        bracketed = true;
        break;
      }
      lo = hi;
    } else {
      lo = mid - (mid - left) * (1.0 - std::ldexp(1.0, -k));
      if (lo - left < 2 * tilt_guard()) break;
      if (f(lo) <= 0.0) {
        bracketed = true;
        break;
      }
      hi = lo;
    }
  }
  if (!bracketed) throw ConvergenceError("s_delta: H' does not reach q inside A_delta");
  const numerics::RootResult r = numerics::solve_bracketed(f, lo, hi, 1e-13);
  return {q, r.x, r.residual, r.lo, r.hi};
}

double delta0(double beta, double q) { return beta / 2 - h_tilde(beta, q).value / 2; }

double q_delta_threshold(double beta, double delta) {
  check_beta(beta);
  if (!(delta >= 0.0 && delta < beta)) throw DomainError("q_delta needs 0 <= delta < beta");
  if (delta >= beta / 2) return 0.0;
  if (delta == 0.0) return kInf;
  return g_prime_raw(beta, beta - 2 * delta);
}

double q_star(double beta, double delta) {
  check_beta(beta);
  if (!(delta >= 0.0 && delta < beta)) throw DomainError("q_star needs 0 <= delta < beta");
  if (delta <= beta / 2) return 0.0;
  // s_delta is the inverse of H'_delta, so the root of s_delta(q) = beta/2 - delta
  // is H'_delta(beta/2 - delta).
  return h_prime_raw(beta, delta, beta / 2 - delta);
}

PsiValue psi(double beta, double delta, double q) {
  check_beta(beta);
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("psi needs finite q > 0");
  if (!(delta >= 0.0 && delta < beta)) throw DomainError("psi needs 0 <= delta < beta");
  PsiValue out;
  out.q = q;
  out.delta = delta;
  const double h = h_tilde(beta, q).value;
  if (delta <= beta / 2 - h / 2) {
    out.branch = Branch::G;
    out.tilt = h;
    out.value = -q * h + centered_moment(beta, h, Deriv::L0, Weight::One);
    out.ibp_value = l_half(beta, h) - 2 * q * h;
  } else {
    const double s = s_delta(beta, delta, q).value;
    out.branch = Branch::H;
    out.tilt = s;
    out.value = -q * s + wall_moment(beta, delta, s, Deriv::L0, Weight::One);
    out.ibp_value = l_wall_end(beta, delta, s) - 2 * q * s;
  }
  out.dq = -out.tilt;
  return out;
}

double profile_T(double beta, double delta, double a) {
  if (!(a > 0.0)) throw DomainError("profile_T needs a > 0");
  const PsiValue p = psi(beta, delta, 1.0 / (a * a));
  return a * log_gamma_beta(beta) + a * p.value;
}

double profile_T_d1(double beta, double delta, double a) {
  if (!(a > 0.0)) throw DomainError("profile_T_d1 needs a > 0");
  const double q = 1.0 / (a * a);
  const double h = h_tilde(beta, q).value;
  if (delta <= beta / 2 - h / 2) return log_gamma_beta(beta) + l_half(beta, h);
  const double s = s_delta(beta, delta, q).value;
  return log_gamma_beta(beta) + l_wall_end(beta, delta, s);
}

double profile_T_d2(double beta, double delta, double a) {
  if (!(a > 0.0)) throw DomainError("profile_T_d2 needs a > 0");
  const double q = 1.0 / (a * a);
  const double h = h_tilde(beta, q).value;
  const double a5 = std::pow(a, 5);
  if (delta <= beta / 2 - h / 2) {
    const double hp = 1.0 / centered_moment(beta, h, Deriv::L2, Weight::Centered2);
    return -(2.0 / a5) * (2.0 * hp + a * a * h);
  }
  const double s = s_delta(beta, delta, q).value;
  const double sp = 1.0 / wall_moment(beta, delta, s, Deriv::L2, Weight::X2);
  return -(2.0 / a5) * (2.0 * sp + a * a * s);
}

ExtensionProfile maximize_profile(double beta, double delta) {
  check_beta(beta);
  if (!(beta > beta_c())) throw RegimeError("maximize_profile needs beta > beta_c");
  if (!(delta >= 0.0 && delta < beta)) throw DomainError("maximize_profile needs 0 <= delta < beta");
  if (delta > beta / 2 && delta > delta_bar(beta)) {
    throw RegimeError("(beta, delta) lies in C_bad: the extension profile is not unimodal");
  }
  ExtensionProfile out;
  out.beta = beta;
  out.delta = delta;
  const double qs = q_star(beta, delta);
  const double a_max = qs > 0.0 ? (1.0 - 1e-12) / std::sqrt(qs) : 1e3;
  const double a_min = 1e-3;
  auto tp = [&](double a) { return profile_T_d1(beta, delta, a); };

  double a_hi = a_max;
  double f_hi = tp(a_hi);
  out.a_grid.push_back(a_hi);
  out.t_prime.push_back(f_hi);
  if (!(f_hi < 0.0)) throw ConvergenceError("T' is not negative at the top of the scan window");
  double a_lo = a_hi;
  bool found = false;
  while (a_lo > a_min) {
    a_lo = std::max(a_min, a_hi * 0.85);
    double f_lo;
    try {
      f_lo = tp(a_lo);
    } catch (const ConvergenceError&) {
      break;  // tilt no longer representable; T' is +inf there
    }
    out.a_grid.push_back(a_lo);
    out.t_prime.push_back(f_lo);
    if (f_lo > 0.0) {
      found = true;
      break;
    }
    a_hi = a_lo;
  }
  if (!found) throw ConvergenceError("maximize_profile: no sign change of T' in the scan window");
  const numerics::RootResult r = numerics::solve_bracketed(tp, a_lo, a_hi, 1e-13);
  out.a_bar = r.x;
  out.stationarity = r.residual;
  out.q_bar = 1.0 / (r.x * r.x);
  const PsiValue p = psi(beta, delta, out.q_bar);
  out.branch = p.branch;
  out.tilt = p.tilt;
  out.max_value = r.x * (log_gamma_beta(beta) + p.value);
  return out;
}

double prefactor_theta(double beta, double h) {
  check_g_arg(beta, h);
  const double m0 = centered_moment(beta, h, Deriv::L2, Weight::One);
  const double m1 = centered_moment(beta, h, Deriv::L2, Weight::X);
  const double m2 = centered_moment(beta, h, Deriv::L2, Weight::X2);
  return m2 * m0 - m1 * m1;
}

double prefactor_b(double beta, double h) { return big_g_second(beta, h); }

double prefactor_c(double beta, double delta, double s) { return big_h_second(beta, delta, s); }

GaussHessian gauss_hessian(double beta, double q) {
  if (!(q > 0.0)) throw DomainError("gauss_hessian needs q > 0");
  const double h = h_tilde(beta, q).value;
  const double lp = l1_half(beta, h);
  GaussHessian g;
  g.h = h;
  g.alpha0 = 2.0 * lp / h;
  g.alpha1 = lp / h;
  g.alpha2 = (lp - 2.0 * q) / h;
  g.det = g.alpha2 * g.alpha0 - g.alpha1 * g.alpha1;
  return g;
}

GaussHessian gauss_hessian_quadrature(double beta, double q) {
  if (!(q > 0.0)) throw DomainError("gauss_hessian needs q > 0");
  const double h = h_tilde(beta, q).value;
  GaussHessian g;
  g.h = h;
  g.alpha0 = centered_moment(beta, h, Deriv::L2, Weight::One);
  g.alpha1 = centered_moment(beta, h, Deriv::L2, Weight::X);
  g.alpha2 = centered_moment(beta, h, Deriv::L2, Weight::X2);
  g.det = g.alpha2 * g.alpha0 - g.alpha1 * g.alpha1;
  return g;
}

double gauss_density_fh(double beta, double q, double z1, double z2) {
  const GaussHessian g = gauss_hessian(beta, q);
  if (!(g.det > 0.0) || !(g.alpha2 > 0.0)) {
    throw ConvergenceError("Hessian B(h) is not positive definite; tilt solution is inconsistent");
  }
  const double quad = (g.alpha0 * z1 * z1 - 2.0 * g.alpha1 * z1 * z2 + g.alpha2 * z2 * z2) / g.det;
  return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(g.det));
}

double prefactor_subcrit(double beta, double q, double delta) {
  const double h = h_tilde(beta, q).value;
  const double d0 = beta / 2 - h / 2;
  if (!(delta < d0)) throw RegimeError("prefactor_subcrit needs delta < delta0(q)");
  const double kappa = escape_prob(beta, h / 2, 0);
  const double theta = prefactor_theta(beta, h);
  const double u = delta - d0;
  const double bracket = 1.0 / (-std::expm1(u)) - (1.0 - kappa) / (-std::expm1(u - h));
  return kappa / (2.0 * std::numbers::pi * std::sqrt(theta)) * bracket;
}

double prefactor_crit(double beta, double q, double c_shift) {
  const double h = h_tilde(beta, q).value;
  const double kappa = escape_prob(beta, h / 2, 0);
  auto f = [&](double z) { return gauss_density_fh(beta, q, c_shift, z); };
  return kappa * numerics::integrate_half_line(f, 0.0, 1e-13);
}

double xi_supcrit(double beta, double delta, double q) {
  if (!(delta > 0.0 && delta < beta)) throw DomainError("xi needs 0 < delta < beta");
  if (!(q > q_star(beta, delta))) throw RegimeError("AC prefactor needs q > q*_delta");
  if (!(delta > delta0(beta, q))) throw RegimeError("AC prefactor needs delta > delta0(q)");
  const double s = s_delta(beta, delta, q).value;
  const double num = l_wall_end(beta, delta, s) - lmgf_gap(beta, beta - delta, delta);
  const double c = wall_moment(beta, delta, s, Deriv::L2, Weight::X2);
  return std::exp(num) / std::sqrt(2.0 * std::numbers::pi * c);
}

double prefactor_supcrit(double beta, double delta, double q) {
  const double xi = xi_supcrit(beta, delta, q);
  const double s = s_delta(beta, delta, q).value;
  return escape_prob(beta, s + delta - beta / 2, 0) * xi;
}

double transition_gap_constant(double beta, double q) {
  const double h = h_tilde(beta, q).value;
  const double lp = l1_half(beta, h);
  return lp * (lp - 4.0 * q) / (2.0 * h * (lp - 2.0 * q));
}

double transition_gap_constant_alt(double beta, double q) {
  const double h = h_tilde(beta, q).value;
  const double lp = l1_half(beta, h);
  return lp * (lp - 4.0 * q) / (2.0 * (lp - 2.0 * q));
}

namespace detail {
double big_h_prime_edge(double beta, double delta, double s) {
  return h_prime_raw(beta, delta, s);
}
double l1_at_half(double beta, double h) { return l1_half(beta, h); }
}  // namespace detail

}  // namespace ipdsaw
