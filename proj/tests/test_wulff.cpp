#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"
#include "ipdsaw/wulff.hpp"

using namespace ipdsaw;

TEST_CASE("free Wulff profile") {
  CHECK(wulff_free(2.0, 0.0) == 0.0);
  for (double t : {0.1, 0.25, 0.4}) {
    CHECK(wulff_free(2.0, t) == doctest::Approx(wulff_free(2.0, 1.0 - t)).epsilon(1e-10));
  }
  CHECK(std::abs(wulff_free(2.0, 1.0)) <= 1e-12);

  const WulffProfile p = free_profile(2.0);
  CHECK(p.t_grid.size() == 512);
  CHECK(p.w_values.front() == 0.0);
  for (int s : second_derivative_signs(p)) CHECK(s == -1);
  // grid values agree with the pointwise quadrature
  CHECK(p.w_values[128] == doctest::Approx(wulff_free(2.0, p.t_grid[128])).epsilon(1e-10));
  // W' decreasing on a 200-point grid
  double prev_slope = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const double t0 = i / 200.0, t1 = (i + 1) / 200.0;
    const double slope = (wulff_free(2.0, t1) - wulff_free(2.0, t0)) * 200.0;
    CHECK(slope < prev_slope);
    prev_slope = slope;
  }
}

TEST_CASE("free shape area is one") {
  CHECK(shape_area(2.0) == doctest::Approx(1.0).epsilon(1e-9));
  const auto b = shape_boundary(2.0, 400);
  double twice = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& p = b[i];
    const auto& q = b[(i + 1) % b.size()];
    twice += p.first * q.second - q.first * p.second;
  }
  CHECK(std::abs(std::abs(twice) / 2 - 1.0) <= 1e-3);
}

TEST_CASE("pinned Wulff profile") {
  const double beta = 2.0;
  const double dc = delta_c_explicit(beta);
  CHECK(wulff_pinned(beta, dc + 0.01, 0.0) == 0.0);
  CHECK(classify_shape(beta, dc + 0.01) == ShapeClass::Concave);

  const double delta = 0.8;
  const WulffProfile p = pinned_profile(beta, delta);
  const double s = p.tilt;
  // dense midpoint oracle with one Richardson step
  auto f = [&](double x) { return log_mgf_d1(beta, s * (1.0 - x) + delta - beta / 2); };
  auto mid = [&](int m) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += f((i + 0.5) / m);
    return acc / m;
  };
  const double oracle = (4.0 * mid(40000) - mid(20000)) / 3.0;
  CHECK(std::abs(wulff_pinned(beta, delta, 1.0) - oracle) <= 1e-9);
  CHECK(p.w_values.back() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK_THROWS_AS(wulff_pinned(beta, 0.5 * dc, 0.5), RegimeError);
}

TEST_CASE("convexity flips at delta_check") {
  const double beta = 2.0;
  const double dcheck = delta_check(beta);
  CHECK(classify_shape(beta, dcheck - 0.02) == ShapeClass::Concave);
  CHECK(classify_shape(beta, dcheck + 0.02) == ShapeClass::Convex);
  CHECK_THROWS_AS(classify_shape(beta, dcheck), RegimeError);

  const WulffProfile lo = pinned_profile(beta, dcheck - 0.02);
  const WulffProfile hi = pinned_profile(beta, dcheck + 0.02);
  for (int s : second_derivative_signs(lo)) CHECK(s == -1);
  for (int s : second_derivative_signs(hi)) CHECK(s == 1);
  // numerical second differences agree with the sign rule away from the ends
  for (int i = 2; i + 2 < static_cast<int>(hi.w_values.size()); i += 50) {
    const double d2 = hi.w_values[i + 1] - 2 * hi.w_values[i] + hi.w_values[i - 1];
    CHECK(d2 > 0.0);
  }
  CHECK_THROWS_AS(classify_shape(beta, 0.0), RegimeError);
  CHECK_THROWS_AS(classify_shape(1.0, 0.5), RegimeError);
}

TEST_CASE("profile CSV") {
  std::ostringstream os;
  write_profile_csv(os, free_profile(2.0, 16));
  const std::string text = os.str();
  CHECK(text.rfind("# beta=", 0) == 0);
  CHECK(text.find("\nt,W\n") != std::string::npos);
  int lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 18);
}
