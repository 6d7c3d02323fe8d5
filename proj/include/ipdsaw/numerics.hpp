#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipdsaw {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters valid in general but outside the regime an operation applies to
// (wrong side of a critical curve, point in C_bad, degenerate tie).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature, root finding or iteration did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact engines refuse sizes beyond their configured cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace numerics {

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (31 points) on [a,b]; falls back to tanh-sinh when the
// integrand has a near-singular endpoint that bisection cannot resolve.
// Throws ConvergenceError when the error estimate exceeds
// max(abs_tol, abs_tol * L1 norm).
double integrate(const Fn& f, double a, double b, double abs_tol = 1e-12);

// Integral over [a, +inf).
double integrate_half_line(const Fn& f, double a, double abs_tol = 1e-12);

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

// Bracketed root of f on [lo, hi] (TOMS 748: bisection safeguarded
// secant/inverse-cubic steps). f(lo) and f(hi) must have opposite signs or one
// of them must vanish.
RootResult solve_bracketed(const Fn& f, double lo, double hi, double width_tol = 1e-13,
                           int max_iter = 300);

// Stable log(exp(a) + exp(b)); either argument may be -inf.
double log_add(double a, double b);

// Stable log(sum exp(v_i)) using the maximum shift and pairwise summation.
double log_sum_exp(const std::vector<double>& v);

// Ordinary least squares y = c0 + c1 x; returns {c0, c1, stderr(c1)}.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Weighted least squares with weights w_i = 1 / sigma_i^2.
LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& sigma);

}  // namespace numerics
}  // namespace ipdsaw
