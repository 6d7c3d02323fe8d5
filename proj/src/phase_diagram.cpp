#include "ipdsaw/phase_diagram.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
}

void require_collapsed(double beta, const char* what) {
  check_beta(beta);
  if (!(beta > beta_c())) throw DomainError(std::string(what) + " needs beta > beta_c");
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Extended: return "Extended";
    case Phase::Collapsed: return "Collapsed";
    case Phase::Glued: return "Glued";
  }
  return "?";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::DC: return "DC";
    case Regime::Critical: return "Critical";
    case Regime::AC: return "AC";
  }
  return "?";
}

double beta_c() {
  // z = e^{beta/2} solves z^3 = z^2 + z + 1 (the tribonacci constant).
  static const double value = [] {
    const double r = std::sqrt(33.0);
    double z = (1.0 + std::cbrt(19.0 + 3.0 * r) + std::cbrt(19.0 - 3.0 * r)) / 3.0;
    for (int i = 0; i < 3; ++i) {
      const double p = z * z * z - z * z - z - 1.0;
      const double dp = 3.0 * z * z - 2.0 * z - 1.0;
      z -= p / dp;
    }
    return 2.0 * std::log(z);
  }();
  return value;
}

FrakH frak_h(double beta, double u, int truncation, int max_iter) {
  check_beta(beta);
  if (!(u >= 0.0)) throw DomainError("frak_h needs u >= 0");
  if (truncation < 1) throw DomainError("frak_h needs a positive truncation");
  FrakH out;
  out.truncation = truncation;
  if (u == 0.0) return out;

  // Symmetrised kernel D P D with D = diag(exp(-u|x|/2)); same spectrum as
  // P(y - x) exp(-u|y|). P is applied through the two geometric recursions.
  const int n = 2 * truncation + 1;
  const double r = std::exp(-beta / 2);
  const double cb = c_beta(beta);
  std::vector<double> d(n), v(n, 1.0), w(n), fwd(n), bwd(n);
  for (int i = 0; i < n; ++i) d[i] = std::exp(-u * std::abs(i - truncation) / 2);
  auto apply = [&](const std::vector<double>& in, std::vector<double>& res) {
    for (int i = 0; i < n; ++i) res[i] = d[i] * in[i];
    fwd[0] = res[0];
    for (int i = 1; i < n; ++i) fwd[i] = res[i] + r * fwd[i - 1];
    bwd[n - 1] = res[n - 1];
    for (int i = n - 2; i >= 0; --i) bwd[i] = res[i] + r * bwd[i + 1];
    for (int i = 0; i < n; ++i) res[i] = d[i] * (fwd[i] + bwd[i] - res[i]) / cb;
  };
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    apply(v, w);
    double vv = 0.0, vw = 0.0;
    for (int i = 0; i < n; ++i) {
      vv += v[i] * v[i];
      vw += v[i] * w[i];
    }
    lambda = vw / vv;
    double res2 = 0.0, ww = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = w[i] - lambda * v[i];
      res2 += e * e;
      ww += w[i] * w[i];
    }
    out.residual = std::sqrt(res2 / vv);
    out.iterations = it;
    const double norm = std::sqrt(ww);
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
    // Rayleigh quotient error is O(residual^2 / spectral gap).
    if (out.residual < 1e-11 * lambda) break;
  }
  if (!(out.residual < 1e-7 * lambda)) {
    throw ConvergenceError("frak_h power iteration stalled; residual " +
                           std::to_string(out.residual));
  }
  out.value = std::log(lambda);
  return out;
}

double frak_h_auto(double beta, double u, double tol) {
  if (u == 0.0) return 0.0;
  int m = 120;
  double prev = frak_h(beta, u, m).value;
  for (int k = 0; k < 8; ++k) {
    m *= 2;
    const double cur = frak_h(beta, u, m).value;
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw ConvergenceError("frak_h truncation doubling did not stabilise");
}

double free_energy_zero(double beta) {
  check_beta(beta);
  if (beta >= beta_c()) return beta;
  const double lg = log_gamma_beta(beta);
  auto f = [&](double v) { return lg - v + frak_h_auto(beta, v, 1e-11); };
  double lo = lg * 1e-2;
  while (f(lo) <= 0.0) {
    lo *= 0.1;
    if (lo < 1e-12) throw ConvergenceError("free energy root not bracketed near zero");
  }
  const numerics::RootResult r = numerics::solve_bracketed(f, lo, lg, 1e-11);
  return beta + r.x;
}

double free_energy(double beta, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be >= 0");
  return std::max(free_energy_zero(beta), delta);
}

double delta_c_explicit(double beta) {
  check_beta(beta);
  if (!(beta > beta_c())) throw DomainError("delta_c is defined for beta > beta_c only");
  // log(cosh b - sqrt(cosh^2 b - e^b)) rewritten through the other root
  // e^b / (cosh b + sqrt(...)) so that no large terms cancel.
  const double a = 0.5 * (1.0 + std::exp(-2.0 * beta));
  const double t = std::exp(-beta) / (a * a);
  const double y = std::exp(-2.0 * beta) - a * t / (1.0 + std::sqrt(1.0 - t));
  return -std::log1p(y);
}

double delta_c_variational(double beta) {
  const ExtensionProfile p = maximize_profile(beta, 0.0);
  return beta / 2 - h_tilde(beta, p.q_bar).value / 2;
}

double x_beta(double beta) {
  require_collapsed(beta, "x_beta");
  const double target = -log_gamma_beta(beta);
  auto f = [&](double x) { return detail::lmgf_gap(beta, beta / 2 - x, beta / 2 + x) - target; };
  double lo = 0.0, hi = beta / 4;
  while (f(hi) < 0.0) {
    lo = hi;
    hi = 0.5 * (hi + beta / 2);
    if (beta / 2 - hi < tilt_guard()) throw ConvergenceError("x_beta root not bracketed");
  }
  return numerics::solve_bracketed(f, lo, hi, 1e-15).x;
}

double delta_check(double beta) { return beta / 2 + x_beta(beta); }

double delta_bar_sign_function(double beta, double delta) {
  require_collapsed(beta, "delta_bar");
  if (!(delta > 0.0 && delta <= beta)) throw DomainError("delta_bar scan needs 0 < delta <= beta");
  const double x = x_beta(beta);
  return detail::big_h_prime_edge(beta, delta, beta / 2 - delta - x);
}

bool cbad_nonempty(double beta) { return delta_bar_sign_function(beta, beta) > 0.0; }

double delta_bar(double beta) {
  require_collapsed(beta, "delta_bar");
  const double x = x_beta(beta);
  auto phi = [&](double d) { return detail::big_h_prime_edge(beta, d, beta / 2 - d - x); };
  // phi is increasing in delta, so an empty set is detected at the endpoint.
  if (phi(beta) <= 0.0) return beta;
  const double step = 1e-3;
  double prev = beta / 2;  // phi(beta/2) = H'_{beta/2}(-x) < 0
  double d = prev + step;
  while (d < beta) {
    if (phi(d) > 0.0) break;
    prev = d;
    d += step;
  }
  const double hi = std::min(d, beta);
  return numerics::solve_bracketed(phi, prev, hi, 1e-10).x;
}

double beta_star(double tolerance) {
  double lo = beta_c() + 1e-6;
  double hi = std::numbers::pi / std::sqrt(3.0);
  if (!cbad_nonempty(lo)) throw ConvergenceError("C_bad unexpectedly empty just above beta_c");
  while (cbad_nonempty(hi)) {
    lo = hi;
    hi += 0.5;
    if (hi > 10.0) throw ConvergenceError("C_bad does not close below beta = 10");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (cbad_nonempty(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

RegimePoint classify_phase(double beta, double delta) {
  check_beta(beta);
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be >= 0 and finite");
  RegimePoint p;
  p.beta = beta;
  p.delta = delta;
  p.f0 = free_energy_zero(beta);
  if (beta < beta_c()) {
    p.phase = delta <= p.f0 ? Phase::Extended : Phase::Glued;
    return p;
  }
  if (delta > beta) {
    p.phase = Phase::Glued;
    return p;
  }
  p.phase = Phase::Collapsed;
  if (beta == beta_c()) {
    p.regime = Regime::DC;
    return p;
  }
  const double dc = delta_c_explicit(beta);
  if (std::abs(delta - dc) <= 1e-12) {
    p.regime = Regime::Critical;
  } else {
    p.regime = delta < dc ? Regime::DC : Regime::AC;
  }
  p.in_good_set = delta <= beta / 2 || delta <= delta_bar(beta);
  return p;
}

double surface_free_energy(double beta, double delta) {
  return maximize_profile(beta, delta).max_value;
}

double second_order_constant(double beta) {
  const ExtensionProfile p = maximize_profile(beta, 0.0);
  const double h0 = p.tilt;
  const double lp = detail::l1_at_half(beta, h0);
  return lp / (2.0 * h0 * std::sqrt(p.q_bar));
}

BeadConstants bead_constants(double beta, double delta, bool quotient_fallback) {
  require_collapsed(beta, "bead_constants");
  if (!(delta >= 0.0)) throw DomainError("bead_constants needs delta >= 0");
  BeadConstants b;
  b.zeta = std::acosh(std::exp(-beta / 2) * std::cosh(beta));
  const double em = std::exp(-beta);
  const double lead = 1.0 + 2.0 * em / (-std::expm1(-beta));
  const double tail = std::expm1(beta) - std::exp(b.zeta + beta / 2);
  b.c0_product = lead * tail;
  b.c0_quotient = lead / tail;
  auto kbar = [&](double d) {
    if (!(d < b.zeta + beta / 2)) return kInf;
    const double e = std::exp(d - beta / 2 - b.zeta);
    return 2.0 * (e - std::exp(d - beta)) / (1.0 - e);
  };
  b.k_bar_delta = kbar(delta);
  b.k_bar_zero = kbar(0.0);
  b.k_bar_finite = std::isfinite(b.k_bar_delta);
  const double geo = em / (-std::expm1(-beta));
  b.r = b.k_bar_delta + geo * b.k_bar_zero;
  b.c0_series = (0.5 + geo) * b.k_bar_zero;
  b.c0_in_unit_interval = b.c0_product > 0.0 && b.c0_product < 1.0;
  if (!b.c0_in_unit_interval) {
    b.diagnostic = "C0 product form " + std::to_string(b.c0_product) + " outside (0,1)";
  }
  b.c0 = quotient_fallback ? b.c0_quotient : b.c0_product;
  return b;
}

std::vector<CurveRow> critical_curves(double beta_min, double beta_max, double step) {
  if (!(step > 0.0) || !(beta_max >= beta_min) || !(beta_min > 0.0)) {
    throw DomainError("curves need 0 < beta_min <= beta_max and step > 0");
  }
  std::vector<CurveRow> rows;
  const int n = static_cast<int>(std::floor((beta_max - beta_min) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    CurveRow row;
    row.beta = beta_min + i * step;
    row.f0 = free_energy_zero(row.beta);
    if (row.beta > beta_c()) {
      row.delta_c = delta_c_explicit(row.beta);
      row.delta_bar = delta_bar(row.beta);
      row.delta_check = delta_check(row.beta);
      row.in_cbad_band = row.delta_bar < row.beta;
    } else {
      row.delta_c = row.delta_bar = row.delta_check = kNaN;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CbadSlice> c_bad_scan(double beta_min, double beta_max, double step) {
  std::vector<CbadSlice> out;
  const int n = static_cast<int>(std::floor((beta_max - beta_min) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double b = beta_min + i * step;
    if (!(b > beta_c())) continue;
    const double db = delta_bar(b);
    if (db < b) out.push_back({b, db, b});
  }
  return out;
}

}  // namespace ipdsaw
