#include "ipdsaw/wulff.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

namespace {

struct Solved {
  double a_bar;
  double tilt;
  double delta;  // wall coupling entering the integrand (0 for the free shape)
  bool pinned;
};

Solved solve_free(double beta) {
  const ExtensionProfile p = maximize_profile(beta, 0.0);
  return {p.a_bar, p.tilt, 0.0, false};
}

Solved solve_pinned(double beta, double delta) {
  if (!(beta > beta_c())) throw RegimeError("pinned Wulff shape needs beta > beta_c");
  if (!(delta > delta_c_explicit(beta))) throw RegimeError("pinned Wulff shape needs delta > delta_c");
  if (!(delta < beta)) throw RegimeError("pinned Wulff shape needs delta < beta");
  const ExtensionProfile p = maximize_profile(beta, delta);
  if (p.branch != Branch::H) throw RegimeError("maximiser is on the free branch; no pinned shape");
  return {p.a_bar, p.tilt, delta, true};
}

// L' at the profile abscissa x, through the two gaps to the singular edges.
double slope(double beta, const Solved& s, double x) {
  if (!s.pinned) {
    const double t = (0.5 - x) * s.tilt;
    return detail::lmgf_d1_gap(beta / 2 - t, beta / 2 + t);
  }
  const double u = s.tilt * (1.0 - x);
  return detail::lmgf_d1_gap(beta - s.delta - u, s.delta + u);
}

double curvature_weight(double beta, const Solved& s, double x) {
  if (!s.pinned) {
    const double t = (0.5 - x) * s.tilt;
    return detail::lmgf_d2_gap(beta / 2 - t, beta / 2 + t);
  }
  const double u = s.tilt * (1.0 - x);
  return detail::lmgf_d2_gap(beta - s.delta - u, s.delta + u);
}

double integrate_profile(double beta, const Solved& s, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("profile abscissa must lie in [0, 1]");
  if (t == 0.0) return 0.0;
  return numerics::integrate([&](double x) { return slope(beta, s, x); }, 0.0, t, 1e-13);
}

WulffProfile build(double beta, double delta, const Solved& s, int n, ShapeClass c) {
  if (n < 3) throw DomainError("profile needs at least 3 grid points");
  WulffProfile p;
  p.beta = beta;
  p.delta = delta;
  p.a_bar = s.a_bar;
  p.tilt = s.tilt;
  p.classification = c;
  p.t_grid.resize(n);
  p.w_values.resize(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    if (i > 0) {
      acc += numerics::integrate([&](double x) { return slope(beta, s, x); }, p.t_grid[i - 1], t,
                                 1e-14);
    }
    p.t_grid[i] = t;
    p.w_values[i] = acc;
  }
  return p;
}

}  // namespace

std::string to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::Concave: return "Concave";
    case ShapeClass::Convex: return "Convex";
    case ShapeClass::Free: return "Free";
  }
  return "?";
}

double wulff_free(double beta, double t) { return integrate_profile(beta, solve_free(beta), t); }

double wulff_pinned(double beta, double delta, double t) {
  return integrate_profile(beta, solve_pinned(beta, delta), t);
}

ShapeClass classify_shape(double beta, double delta) {
  const Solved s = solve_pinned(beta, delta);
  // At delta_check the solved tilt is zero only up to root-finder precision,
  // so the tie is decided on delta itself.
  if (std::abs(delta - delta_check(beta)) <= 1e-12 * std::max(1.0, beta) || std::abs(s.tilt) < 1e-12) {
    throw RegimeError("degenerate shape: s_delta(q_bar) = 0 at delta = delta_check");
  }
  return s.tilt > 0.0 ? ShapeClass::Concave : ShapeClass::Convex;
}

std::vector<int> second_derivative_signs(const WulffProfile& p) {
  const Solved s{p.a_bar, p.tilt, p.delta, p.classification != ShapeClass::Free};
  std::vector<int> out;
  for (std::size_t i = 1; i + 1 < p.t_grid.size(); ++i) {
    // Free shape: W'' = -h L''((1/2 - x) h). Pinned: W'' = -s L''(.).
    const double w2 = -p.tilt * curvature_weight(p.beta, s, p.t_grid[i]);
    out.push_back(w2 > 0.0 ? 1 : (w2 < 0.0 ? -1 : 0));
  }
  return out;
}

WulffProfile free_profile(double beta, int n_points) {
  return build(beta, 0.0, solve_free(beta), n_points, ShapeClass::Free);
}

WulffProfile pinned_profile(double beta, double delta, int n_points) {
  const ShapeClass c = classify_shape(beta, delta);
  return build(beta, delta, solve_pinned(beta, delta), n_points, c);
}

std::vector<std::pair<double, double>> shape_boundary(double beta, int n_points) {
  const WulffProfile p = free_profile(beta, n_points);
  std::vector<std::pair<double, double>> pts;
  const double a = p.a_bar;
  for (std::size_t i = 0; i < p.t_grid.size(); ++i) {
    pts.emplace_back(a * p.t_grid[i], 0.5 * a * p.w_values[i]);
  }
  for (std::size_t i = p.t_grid.size(); i-- > 0;) {
    pts.emplace_back(a * p.t_grid[i], -0.5 * a * p.w_values[i]);
  }
  return pts;
}

double shape_area(double beta) {
  const Solved s = solve_free(beta);
  // int_0^1 int_0^t f(x) dx dt = int_0^1 (1 - x) f(x) dx
  const double integral = numerics::integrate(
      [&](double x) { return (1.0 - x) * slope(beta, s, x); }, 0.0, 1.0, 1e-13);
  return s.a_bar * s.a_bar * integral;
}

void write_profile_csv(std::ostream& os, const WulffProfile& p) {
  os << fmt::format("# beta={:.17g} delta={:.17g} classification={}\n", p.beta, p.delta,
                    to_string(p.classification));
  os << "t,W\n";
  for (std::size_t i = 0; i < p.t_grid.size(); ++i) {
    os << fmt::format("{:.17g},{:.17g}\n", p.t_grid[i], p.w_values[i]);
  }
}

}  // namespace ipdsaw
