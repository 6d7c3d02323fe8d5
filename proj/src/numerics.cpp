#include "ipdsaw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace ipdsaw::numerics {

namespace {

constexpr int kMaxPanels = 4000;

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk_panel(const Fn& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0, l1 = 0.0;
  // max_depth 0 gives a single non-adaptive Kronrod estimate with its
  // embedded-Gauss error bound. That bound is reported on the reference
  // interval [-1, 1] (the value and L1 norm are rescaled, the error is not),
  // so it is scaled by the half-width here.
  double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  return {a, b, v, err * 0.5 * (b - a), l1};
}

bool accept(double err, double l1, double abs_tol) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  return err <= std::max(abs_tol, floor);
}

}  // namespace

double integrate(const Fn& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol);

  std::priority_queue<Panel> heap;
  Panel first = gk_panel(f, a, b);
  double total = first.value, err = first.error, l1 = first.l1;
  heap.push(first);
  int panels = 1;
  while (!accept(err, l1, abs_tol) && panels < kMaxPanels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;  // interval cannot be split further in double precision
    }
    Panel left = gk_panel(f, worst.a, mid);
    Panel right = gk_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  if (accept(err, l1, abs_tol) && std::isfinite(total)) {
    // Recompute the sums from the panels to drop accumulated update roundoff.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
      v += heap.top().value;
      e += heap.top().error;
      heap.pop();
    }
    if (accept(e, l1, abs_tol)) return v;
    total = v;
    err = e;
  }

  // Endpoint near-singularities (log-type blow-up of the moment generating
  // function at the edge of the tilt domain) are handled far better by the
  // double-exponential substitution.
  boost::math::quadrature::tanh_sinh<double> ts(20);
  double ts_err = 0.0, ts_l1 = 0.0;
  double v = ts.integrate(f, a, b, 1e-15, &ts_err, &ts_l1);
  if (std::isfinite(v) && accept(ts_err, ts_l1, abs_tol)) return v;
  throw ConvergenceError("quadrature did not converge on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]: GK error " + std::to_string(err) +
                         ", tanh-sinh error " + std::to_string(ts_err));
}

double integrate_half_line(const Fn& f, double a, double abs_tol) {
  boost::math::quadrature::exp_sinh<double> es;
  double err = 0.0, l1 = 0.0;
  auto g = [&](double t) { return f(a + t); };
  double v = es.integrate(g, 1e-15, &err, &l1);
  if (!std::isfinite(v) || !accept(err, l1, abs_tol)) {
    throw ConvergenceError("half-line quadrature did not converge: error " + std::to_string(err));
  }
  return v;
}

RootResult solve_bracketed(const Fn& f, double lo, double hi, double width_tol, int max_iter) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw ConvergenceError("root bracket has a non-finite endpoint value");
  }
  if (flo == 0.0) return {lo, 0.0, lo, lo, 0};
  if (fhi == 0.0) return {hi, 0.0, hi, hi, 0};
  if ((flo > 0) == (fhi > 0)) {
    throw ConvergenceError("root not bracketed on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
  auto tol = [width_tol](double a, double b) { return std::abs(b - a) <= width_tol; };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  RootResult out;
  out.lo = r.first;
  out.hi = r.second;
  double f1 = f(r.first), f2 = f(r.second);
  if (std::abs(f1) <= std::abs(f2)) {
    out.x = r.first;
    out.residual = f1;
  } else {
    out.x = r.second;
    out.residual = f2;
  }
  out.iterations = static_cast<int>(iters);
  if (std::abs(r.second - r.first) > width_tol && out.residual != 0.0 &&
      static_cast<int>(iters) >= max_iter) {
    throw ConvergenceError("root finder hit the iteration cap");
  }
  return out;
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

namespace {
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}
}  // namespace

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (m == -std::numeric_limits<double>::infinity()) return m;
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::exp(v[i] - m);
  return m + std::log(pairwise_sum(e.data(), e.size()));
}

LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || sigma.size() != n) {
    throw DomainError("linear fit needs at least two matched points");
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope_stderr = std::sqrt(sw / det);
  return fit;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> ones(n, 1.0);
  LinearFit fit = weighted_linear_fit(x, y, ones);
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr *= std::sqrt(rss / static_cast<double>(n - 2));
  } else {
    fit.slope_stderr = 0.0;
  }
  return fit;
}

}  // namespace ipdsaw::numerics
