#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ipdsaw {

// Shape names refer to the profile W: Concave means W'' < 0 (convex globule),
// Convex means W'' > 0 (concave globule).
enum class ShapeClass { Concave, Convex, Free };

std::string to_string(ShapeClass c);

struct WulffProfile {
  double beta = 0.0;
  double delta = 0.0;
  double a_bar = 0.0;  // horizontal extension of the rescaled globule
  double tilt = 0.0;   // h_tilde(q_bar) for the free shape, s_delta(q_bar) when pinned
  std::vector<double> t_grid;
  std::vector<double> w_values;
  ShapeClass classification = ShapeClass::Free;
};

// W_beta(t) = int_0^t L'((1/2 - x) h) dx, h = h_tilde(a_beta^{-2}).
double wulff_free(double beta, double t);
// W_{beta,delta}(t) = int_0^t L'(s (1 - x) + delta - beta/2) dx, s = s_delta(q_bar).
double wulff_pinned(double beta, double delta, double t);

// Concave for delta_c < delta < delta_check, Convex for delta_check < delta < beta.
// Throws RegimeError outside AC within C_good and at the degenerate point s = 0.
ShapeClass classify_shape(double beta, double delta);

// Sign of W'' at interior grid points, from W'' = -tilt * L''(.) (never zero
// unless the tilt vanishes).
std::vector<int> second_derivative_signs(const WulffProfile& p);

WulffProfile free_profile(double beta, int n_points = 512);
WulffProfile pinned_profile(double beta, double delta, int n_points = 512);

// Closed boundary of S_beta: upper half left to right, then lower half back.
std::vector<std::pair<double, double>> shape_boundary(double beta, int n_points = 512);
// a_beta^2 int_0^1 W_beta.
double shape_area(double beta);

void write_profile_csv(std::ostream& os, const WulffProfile& p);

}  // namespace ipdsaw
