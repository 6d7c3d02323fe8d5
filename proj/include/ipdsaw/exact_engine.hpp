#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ipdsaw {

// Nonnegative weight stored as its natural log, with an explicit zero flag.
class LogWeight {
 public:
  LogWeight() = default;
  static LogWeight zero() { return {}; }
  static LogWeight one() { return from_log(0.0); }
  static LogWeight from_log(double log_value);
  static LogWeight from_linear(double value);

  bool is_zero() const { return zero_; }
  // Natural log; -inf for the zero weight.
  double log() const;

  LogWeight& operator+=(const LogWeight& other);
  LogWeight& operator*=(const LogWeight& other);
  friend LogWeight operator+(LogWeight a, const LogWeight& b) { return a += b; }
  friend LogWeight operator*(LogWeight a, const LogWeight& b) { return a *= b; }

 private:
  double log_ = 0.0;
  bool zero_ = true;
};

LogWeight log_weight_sum(const std::vector<LogWeight>& terms);
// |log a - log b| / max(1, |log a|); 0 if both are zero, +inf if exactly one is.
double log_relative_gap(const LogWeight& a, const LogWeight& b);

struct PolymerConfig {
  std::vector<long> stretches;
  long length() const;  // N + sum |l_i|
};

enum class Constraint { All, SingleBead, EndsNonzero };

std::string to_string(Constraint c);

double hamiltonian(const PolymerConfig& config, double beta, double delta);
bool satisfies(const PolymerConfig& config, Constraint c);

// Every element of Omega_L (L <= 12) satisfying the constraint.
std::vector<PolymerConfig> enumerate_configs(int L, Constraint c = Constraint::All);
LogWeight brute_force_Z(int L, double beta, double delta, Constraint c = Constraint::All);

constexpr int kDefaultDpCap = 400;

LogWeight dp_Z(int L, double beta, double delta, Constraint c = Constraint::All,
               int cap = kDefaultDpCap);

struct FirstStretchLaw {
  LogWeight z;
  std::vector<double> probabilities;  // P(|l_1| = k), k = 0..L-1
  double mean_abs = 0.0;              // E|l_1|
};

FirstStretchLaw first_stretch_law(int L, double beta, double delta, int cap = kDefaultDpCap);

LogWeight rw_representation_Z(int L, double beta, double delta, int cap = kDefaultDpCap);

struct BeadDecomposition {
  std::vector<int> tau;           // 0 = tau_0 < tau_1 < ... < tau_n = N
  std::vector<long> masses;       // |B_j|
  long i_max = 0;                 // largest alternating run, counting 1 + |l_i| per stretch
  long i_0 = 0;                   // first-bead length with the l_0 = 0 convention
};

BeadDecomposition bead_decompose(const PolymerConfig& config);

struct BeadConvolution {
  LogWeight direct;        // Z^c_L from the ends-nonzero DP
  LogWeight convolution;   // sum over bead compositions
  LogWeight full_direct;   // Z_L from the unconstrained DP
  LogWeight full_rebuilt;  // sum_k Z^c_{L-k} + 1
  double residual = 0.0;   // log-space gap between direct and convolution
  double full_residual = 0.0;
};

BeadConvolution bead_convolution_check(int L, double beta, double delta, int cap = kDefaultDpCap);

// Extended-bead partition functions bar Z and hat Z for lengths 0..L.
std::vector<LogWeight> first_bead_Z(int L, double beta, double delta, int cap = kDefaultDpCap);
std::vector<LogWeight> following_bead_Z(int L, double beta, int cap = kDefaultDpCap);

// D_N(q, delta) with qN^2 = area exactly: E[e^{(delta - beta/2) X_N}; A_N = area, X_i > 0].
LogWeight aux_D_exact(int N, long area, double beta, double delta);

// D_n(area_n) for n = 1..n_max with areas given per n (area_n <= 0 skips n).
std::vector<LogWeight> aux_D_many(const std::vector<long>& areas, double beta, double delta);

enum class AuxRegime { DC, Critical, AC };
std::string to_string(AuxRegime r);

struct AuxCount {
  int N = 0;
  long area = 0;
  double q = 0.0;
  AuxRegime regime = AuxRegime::DC;
  LogWeight exact;
  double log_pred = 0.0;
  double prefactor = 0.0;
  double psi = 0.0;
  double log_ratio = 0.0;  // log exact - log_pred
  double c_shift = 0.0;    // critical window only
};

// Regime chosen by delta vs delta0(q) and q vs q*. RegimeError inside the
// band |delta - delta0(q)| < 1e-9 or when q <= q* on the adsorbed side.
AuxCount aux_D_asymptotic(int N, long area, double beta, double delta, bool with_exact = true);
// Critical window: delta = delta0(q_base) and area/N^2 = q_base + c/sqrt(N).
AuxCount aux_D_asymptotic_critical(int N, long area, double beta, double q_base,
                                   bool with_exact = true);

struct RoughBound {
  bool holds = true;
  double constant = 0.0;           // c calibrated on the first calibration_points entries
  std::vector<int> n_values;
  std::vector<double> log_ratio;   // log D_N - N psi(q, delta)
  std::string report;              // context of the first violation, if any
};

// Checks D_N <= c e^{N psi(q, delta)} with q = area/N^2 for each (N, area).
RoughBound rough_bound_check(const std::vector<int>& n_values, const std::vector<long>& areas,
                             double beta, double delta, int calibration_points = 1);

// log(Gamma^N * 2 * D_N((L-N)/N^2, delta)) + beta L for N = 1..L/2, i.e. the
// single-bead partition function split by horizontal extension.
std::vector<LogWeight> single_bead_by_extension(int L, double beta, double delta);

}  // namespace ipdsaw
