#include "ipdsaw/verify.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>

#include <fmt/format.h>

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/exact_engine.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

namespace {

using Check = std::function<std::pair<bool, std::string>()>;

CheckResult run(const std::string& name, const Check& check) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [ok, detail] = check();
    r.pass = ok;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::pair<bool, std::string> check_beta_c() {
  const double bc = beta_c();
  const double res = std::abs(gamma_beta(bc) - 1.0);
  return {res <= 1e-12 && std::abs(bc - 1.219) < 1e-3, fmt::format("beta_c={:.12f} |Gamma-1|={:.2e}", bc, res)};
}

std::pair<bool, std::string> check_ibp() {
  double worst = 0.0;
  int points = 0;
  for (double beta : {1.5, 2.0, 3.0}) {
    for (double q : {0.3, 1.0, 2.5}) {
      for (double delta : {0.0, 0.4 * beta, 0.7 * beta}) {
        const PsiValue p = psi(beta, delta, q);
        worst = std::max(worst, std::abs(p.value - p.ibp_value));
        if (p.branch == Branch::G) {
          worst = std::max(worst, std::abs(big_g_prime(beta, p.tilt) - q));
        } else {
          worst = std::max(worst, std::abs(big_h_prime(beta, delta, p.tilt) - q));
        }
        ++points;
      }
    }
  }
  return {worst <= 1e-9 && points >= 25, fmt::format("{} points, worst residual {:.2e}", points, worst)};
}

std::pair<bool, std::string> check_delta_c() {
  double worst = 0.0, worst_sum = 0.0;
  for (double beta : {1.5, 2.0, 3.0, 5.0, 8.0}) {
    const double a = delta_c_explicit(beta);
    worst = std::max(worst, std::abs(a - delta_c_variational(beta)));
    worst_sum = std::max(worst_sum, std::abs(a + delta_check(beta) - beta));
  }
  return {worst <= 1e-8 && worst_sum <= 1e-8,
          fmt::format("explicit vs variational {:.2e}, delta_c + delta_check - beta {:.2e}", worst,
                      worst_sum)};
}

std::pair<bool, std::string> check_oracle_chain(int l_max) {
  double worst = 0.0;
  for (auto [beta, delta] : {std::pair{1.0, 0.0}, {2.0, 0.5}, {3.0, 2.9}}) {
    for (int L = 1; L <= l_max; ++L) {
      const LogWeight bf = brute_force_Z(L, beta, delta);
      worst = std::max(worst, log_relative_gap(bf, dp_Z(L, beta, delta)));
      worst = std::max(worst, log_relative_gap(bf, rw_representation_Z(L, beta, delta)));
    }
  }
  return {worst <= 1e-10, fmt::format("L <= {}, worst log gap {:.2e}", l_max, worst)};
}

std::pair<bool, std::string> check_bead_convolution() {
  double worst = 0.0;
  for (auto [beta, delta] : {std::pair{2.0, 0.8}, {3.0, 0.0}}) {
    for (int L = 2; L <= 30; ++L) {
      const BeadConvolution b = bead_convolution_check(L, beta, delta);
      worst = std::max({worst, b.residual, b.full_residual});
    }
  }
  return {worst <= 1e-9, fmt::format("L <= 30, worst residual {:.2e}", worst)};
}

// Last-step relative change of the exact/predicted ratio and monotone flattening.
std::pair<bool, std::string> ratio_trend(double beta, double delta, double q,
                                         const std::vector<int>& ns) {
  std::vector<double> ratio;
  for (int n : ns) {
    const long area = std::lround(q * n * n);
    ratio.push_back(std::exp(aux_D_asymptotic(n, area, beta, delta).log_ratio));
  }
  std::vector<double> steps;
  for (std::size_t i = 1; i < ratio.size(); ++i) steps.push_back(std::abs(ratio[i] / ratio[i - 1] - 1));
  bool flattening = true;
  for (std::size_t i = 1; i < steps.size(); ++i) flattening = flattening && steps[i] <= steps[i - 1];
  const double last = steps.back();
  return {flattening && last <= 0.05,
          fmt::format("ratios {:.4f} {:.4f} {:.4f} {:.4f}, last change {:.3f}%", ratio[0], ratio[1],
                      ratio[2], ratio[3], 100 * last)};
}

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level) {
  std::vector<CheckResult> out;
  out.push_back(run("beta_c", check_beta_c));
  out.push_back(run("ibp_and_round_trips", check_ibp));
  out.push_back(run("delta_c_agreement", check_delta_c));
  out.push_back(run("oracle_chain_L10", [] { return check_oracle_chain(10); }));
  if (level == VerifyLevel::Full) {
    out.push_back(run("oracle_chain_L12", [] { return check_oracle_chain(12); }));
    out.push_back(run("bead_convolution_L30", check_bead_convolution));
    out.push_back(run("dn_ratio_dc", [] { return ratio_trend(2.0, 0.0, 1.0, {16, 24, 32, 40}); }));
    out.push_back(run("dn_ratio_ac", [] { return ratio_trend(2.0, 1.2, 1.0, {16, 24, 32, 40}); }));
  }
  return out;
}

}  // namespace ipdsaw
