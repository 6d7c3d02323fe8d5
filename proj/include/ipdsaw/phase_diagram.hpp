#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ipdsaw {

enum class Phase { Extended, Collapsed, Glued };
enum class Regime { DC, Critical, AC };

std::string to_string(Phase p);
std::string to_string(Regime r);

struct RegimePoint {
  double beta = 0.0;
  double delta = 0.0;
  Phase phase = Phase::Extended;
  std::optional<Regime> regime;  // present iff phase == Collapsed
  bool in_good_set = false;      // (beta, delta) in C_good
  double f0 = 0.0;               // f(beta, 0)
};

// Root of Gamma_beta = 1.
double beta_c();

struct FrakH {
  double value = 0.0;     // dominant log-eigenvalue
  double residual = 0.0;  // ||K v - lambda v|| / ||v|| at exit
  int truncation = 0;     // M
  int iterations = 0;
};

// Growth rate of E[exp(-u G_N)] by power iteration of the transfer operator
// on |x| <= M. Throws ConvergenceError if the residual stays above tolerance.
FrakH frak_h(double beta, double u, int truncation = 120, int max_iter = 2000000);
// Doubles the truncation from 120 until successive values agree to tol.
double frak_h_auto(double beta, double u, double tol = 1e-8);

// Volume free energy f(beta, delta) = max(f(beta, 0), delta).
double free_energy_zero(double beta);
double free_energy(double beta, double delta);

RegimePoint classify_phase(double beta, double delta);

double delta_c_explicit(double beta);
double delta_c_variational(double beta);
double x_beta(double beta);
double delta_check(double beta);

// delta -> H'_delta(beta/2 - delta - x_beta); increasing, its zero is delta_bar.
double delta_bar_sign_function(double beta, double delta);
double delta_bar(double beta);
// True iff C_bad has a nonempty slice at this beta (delta_bar(beta) < beta).
bool cbad_nonempty(double beta);
double beta_star(double tolerance = 1e-8);

double surface_free_energy(double beta, double delta);
double second_order_constant(double beta);

struct BeadConstants {
  double zeta = 0.0;
  double c0 = 0.0;           // value in use (product form unless fallback requested)
  double c0_product = 0.0;   // display form read as a product
  double c0_quotient = 0.0;  // display form read as a quotient
  double c0_series = 0.0;    // sum_n hat Z_n e^{-beta n} in closed form
  bool c0_in_unit_interval = false;
  std::string diagnostic;    // empty when the product form lies in (0, 1)
  double k_bar_delta = 0.0;  // +inf when delta >= zeta + beta/2
  double k_bar_zero = 0.0;
  double r = 0.0;
  bool k_bar_finite = false;
};

BeadConstants bead_constants(double beta, double delta, bool quotient_fallback = false);

struct CurveRow {
  double beta = 0.0;
  double delta_c = 0.0;      // NaN where undefined (beta <= beta_c)
  double delta_bar = 0.0;
  double delta_check = 0.0;
  double f0 = 0.0;
  bool in_cbad_band = false;
};

std::vector<CurveRow> critical_curves(double beta_min, double beta_max, double step);

struct CbadSlice {
  double beta = 0.0;
  double delta_lower = 0.0;  // delta_bar(beta)
  double delta_upper = 0.0;  // beta
};

// Slices {delta_bar(beta) < delta <= beta} for every grid beta where C_bad is
// nonempty.
std::vector<CbadSlice> c_bad_scan(double beta_min, double beta_max, double step);

}  // namespace ipdsaw
