#include "ipdsaw/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

// ---------------------------------------------------------------------------
// LogWeight

LogWeight LogWeight::from_log(double log_value) {
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
    throw DomainError("LogWeight needs a finite log or -inf");
  }
  LogWeight w;
  if (log_value == -std::numeric_limits<double>::infinity()) return w;
  w.log_ = log_value;
  w.zero_ = false;
  return w;
}

LogWeight LogWeight::from_linear(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("LogWeight needs a finite value >= 0");
  if (value == 0.0) return {};
  return from_log(std::log(value));
}

double LogWeight::log() const {
  return zero_ ? -std::numeric_limits<double>::infinity() : log_;
}

LogWeight& LogWeight::operator+=(const LogWeight& other) {
  if (other.zero_) return *this;
  if (zero_) {
    *this = other;
    return *this;
  }
  log_ = numerics::log_add(log_, other.log_);
  return *this;
}

LogWeight& LogWeight::operator*=(const LogWeight& other) {
  if (zero_ || other.zero_) {
    *this = {};
    return *this;
  }
  log_ += other.log_;
  return *this;
}

LogWeight log_weight_sum(const std::vector<LogWeight>& terms) {
  std::vector<double> logs;
  logs.reserve(terms.size());
  for (const auto& t : terms) {
    if (!t.is_zero()) logs.push_back(t.log());
  }
  if (logs.empty()) return {};
  return LogWeight::from_log(numerics::log_sum_exp(logs));
}

double log_relative_gap(const LogWeight& a, const LogWeight& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  if (a.is_zero() != b.is_zero()) return std::numeric_limits<double>::infinity();
  return std::abs(a.log() - b.log()) / std::max(1.0, std::abs(a.log()));
}

// ---------------------------------------------------------------------------
// Configurations

long PolymerConfig::length() const {
  long total = static_cast<long>(stretches.size());
  for (long l : stretches) total += std::abs(l);
  return total;
}

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::All: return "all";
    case Constraint::SingleBead: return "single_bead";
    case Constraint::EndsNonzero: return "ends_nonzero";
  }
  return "?";
}

double hamiltonian(const PolymerConfig& config, double beta, double delta) {
  const auto& l = config.stretches;
  if (l.empty()) return 0.0;
  double h = delta * static_cast<double>(std::abs(l.front()));
  for (std::size_t n = 0; n + 1 < l.size(); ++n) {
    if (l[n] * l[n + 1] < 0) h += beta * static_cast<double>(std::min(std::abs(l[n]), std::abs(l[n + 1])));
  }
  return h;
}

bool satisfies(const PolymerConfig& config, Constraint c) {
  const auto& l = config.stretches;
  if (l.empty()) return false;
  switch (c) {
    case Constraint::All: return true;
    case Constraint::EndsNonzero: return l.back() != 0;
    case Constraint::SingleBead:
      for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] == 0) return false;
        if (i + 1 < l.size() && l[i] * l[i + 1] >= 0) return false;
      }
      return true;
  }
  return false;
}

std::vector<PolymerConfig> enumerate_configs(int L, Constraint c) {
  if (L < 1) throw DomainError("L must be >= 1");
  if (L > 12) throw CapacityError("exhaustive enumeration is limited to L <= 12");
  std::vector<PolymerConfig> out;
  PolymerConfig cur;
  std::function<void(long)> rec = [&](long remaining) {
    if (remaining == 0) {
      if (satisfies(cur, c)) out.push_back(cur);
      return;
    }
    const long m = remaining - 1;
    for (long l = -m; l <= m; ++l) {
      cur.stretches.push_back(l);
      rec(m - std::abs(l));
      cur.stretches.pop_back();
    }
  };
  rec(L);
  return out;
}

LogWeight brute_force_Z(int L, double beta, double delta, Constraint c) {
  const std::vector<PolymerConfig> configs = enumerate_configs(L, c);
  std::vector<double> logs;
  logs.reserve(configs.size());
  for (const auto& cfg : configs) logs.push_back(hamiltonian(cfg, beta, delta));
  if (logs.empty()) return {};
  return LogWeight::from_log(numerics::log_sum_exp(logs));
}

// ---------------------------------------------------------------------------
// Stretch dynamic programme
//
// Stretches are processed in reverse order so that the wall stretch comes
// last. U[m][l] is the weight of reversed prefixes of total length m ending
// with stretch l, times e^{-beta (m - |l|)}; this keeps every entry <= 1.

namespace {

void check_dp_args(int L, double beta, double delta, int cap) {
  if (L < 1) throw DomainError("L must be >= 1");
  if (L > cap) throw CapacityError(fmt::format("L = {} exceeds the DP cap {}", L, cap));
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be >= 0");
  if (!std::isfinite(delta)) throw DomainError("delta must be finite");
}

// Returns U[L][l] for l in [-(L-1), L-1] (offset L-1).
std::vector<double> stretch_dp_final(int L, double beta, Constraint c) {
  const int off = L - 1;
  const int width = 2 * L - 1;
  std::vector<std::vector<double>> u(L + 1, std::vector<double>(width, 0.0));
  const double eb = std::exp(-beta);
  const bool nonzero_start = c != Constraint::All;
  const bool single = c == Constraint::SingleBead;
  for (int l = -(L - 1); l <= L - 1; ++l) {
    if (nonzero_start && l == 0) continue;
    u[1 + std::abs(l)][l + off] = eb;
  }
  std::vector<double> pre_pos(L + 1), pre_neg(L + 1), tail_pos(L + 1), tail_neg(L + 1);
  for (int m = 1; m <= L - 1; ++m) {
    const auto& row = u[m];
    const int kmax = m - 1;       // |l| <= m - 1 in row m
    const int kout = L - m - 1;   // |l'| allowed for the next stretch
    if (kout < 0) continue;
    double w_pos = 0.0, w_neg = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      const double e = std::exp(-beta * k);
      w_pos += row[k + off] * e;
      w_neg += row[-k + off] * e;
    }
    const double u0 = row[off];
    const int K = std::max(kmax, kout);
    pre_pos[0] = pre_neg[0] = 0.0;
    for (int k = 1; k <= K; ++k) {
      pre_pos[k] = pre_pos[k - 1] + (k <= kmax ? row[k + off] : 0.0);
      pre_neg[k] = pre_neg[k - 1] + (k <= kmax ? row[-k + off] : 0.0);
    }
    // tail(k) = sum_{j > k} U[j] e^{-beta (j - k)}
    tail_pos[K] = tail_neg[K] = 0.0;
    for (int k = K - 1; k >= 0; --k) {
      tail_pos[k] = eb * ((k + 1 <= kmax ? row[k + 1 + off] : 0.0) + tail_pos[k + 1]);
      tail_neg[k] = eb * ((k + 1 <= kmax ? row[-(k + 1) + off] : 0.0) + tail_neg[k + 1]);
    }
    if (!single) u[m + 1][off] += eb * (u0 + w_pos + w_neg);
    for (int k = 1; k <= kout; ++k) {
      auto& dest_pos = u[m + 1 + k][k + off];
      auto& dest_neg = u[m + 1 + k][-k + off];
      if (single) {
        dest_pos += eb * (pre_neg[k] + tail_neg[k]);
        dest_neg += eb * (pre_pos[k] + tail_pos[k]);
      } else {
        dest_pos += eb * (u0 + w_pos + pre_neg[k] + tail_neg[k]);
        dest_neg += eb * (u0 + w_neg + pre_pos[k] + tail_pos[k]);
      }
    }
  }
  return u[L];
}

// log of the weight carried by final stretch value l.
std::vector<double> final_logs(const std::vector<double>& row, int L, double beta, double delta) {
  const int off = L - 1;
  std::vector<double> out(row.size(), -std::numeric_limits<double>::infinity());
  for (int l = -(L - 1); l <= L - 1; ++l) {
    const double v = row[l + off];
    if (v > 0.0) {
      const int a = std::abs(l);
      out[l + off] = std::log(v) + beta * (L - a) + delta * a;
    }
  }
  return out;
}

}  // namespace

LogWeight dp_Z(int L, double beta, double delta, Constraint c, int cap) {
  check_dp_args(L, beta, delta, cap);
  const std::vector<double> logs = final_logs(stretch_dp_final(L, beta, c), L, beta, delta);
  std::vector<double> finite;
  for (double x : logs) {
    if (std::isfinite(x)) finite.push_back(x);
  }
  if (finite.empty()) return {};
  return LogWeight::from_log(numerics::log_sum_exp(finite));
}

FirstStretchLaw first_stretch_law(int L, double beta, double delta, int cap) {
  check_dp_args(L, beta, delta, cap);
  const std::vector<double> logs = final_logs(stretch_dp_final(L, beta, Constraint::All), L, beta, delta);
  FirstStretchLaw out;
  std::vector<double> finite;
  for (double x : logs) {
    if (std::isfinite(x)) finite.push_back(x);
  }
  out.z = LogWeight::from_log(numerics::log_sum_exp(finite));
  const double lz = out.z.log();
  out.probabilities.assign(L, 0.0);
  const int off = L - 1;
  for (int l = -(L - 1); l <= L - 1; ++l) {
    const double x = logs[l + off];
    if (std::isfinite(x)) out.probabilities[std::abs(l)] += std::exp(x - lz);
  }
  for (int k = 0; k < L; ++k) out.mean_abs += k * out.probabilities[k];
  return out;
}

// ---------------------------------------------------------------------------
// Random-walk representation

namespace {

// out[i] = sum_j in[j] r^{|i - j|} / c for i, j in [0, n).
void geometric_apply(const double* in, double* out, int n, double r, double inv_c,
                     std::vector<double>& fwd, std::vector<double>& bwd) {
  if (static_cast<int>(fwd.size()) < n) {
    fwd.resize(n);
    bwd.resize(n);
  }
  fwd[0] = in[0];
  for (int i = 1; i < n; ++i) fwd[i] = in[i] + r * fwd[i - 1];
  bwd[n - 1] = in[n - 1];
  for (int i = n - 2; i >= 0; --i) bwd[i] = in[i] + r * bwd[i + 1];
  for (int i = 0; i < n; ++i) out[i] = (fwd[i] + bwd[i] - in[i]) * inv_c;
}

void renormalise(std::vector<std::vector<double>>& table, double& log_scale) {
  double mx = 0.0;
  for (const auto& row : table) {
    for (double v : row) mx = std::max(mx, v);
  }
  if (mx > 0.0) {
    for (auto& row : table) {
      for (double& v : row) v /= mx;
    }
    log_scale += std::log(mx);
  }
}

}  // namespace

LogWeight rw_representation_Z(int L, double beta, double delta, int cap) {
  check_dp_args(L, beta, delta, cap);
  if (!(beta > 0.0)) throw DomainError("random-walk representation needs beta > 0");
  // v[a][x + a] = P(A_n = a, X_n = x) e^{beta a / 2} / scale, with A_n = sum |X_i|.
  const double r = std::exp(-beta / 2);
  const double inv_c = 1.0 / c_beta(beta);
  const double lg = log_gamma_beta(beta);
  std::vector<std::vector<double>> cur(L + 1), nxt(L + 1);
  for (int a = 0; a <= L; ++a) cur[a].assign(2 * a + 1, 0.0);
  cur[0][0] = 1.0;
  double log_scale = 0.0;
  std::vector<double> in, out, fwd, bwd;
  std::vector<double> terms;
  for (int n = 1; n <= L; ++n) {
    const int amax = L - n;  // the area at step n cannot exceed L - n
    for (int a = 0; a <= L; ++a) nxt[a].assign(2 * a + 1, 0.0);
    for (int a = 0; a <= amax; ++a) {
      const auto& row = cur[a];
      if (std::none_of(row.begin(), row.end(), [](double v) { return v > 0.0; })) continue;
      const int ymax = amax - a;
      const int w = std::max(a, ymax);
      const int n_win = 2 * w + 1;
      in.assign(n_win, 0.0);
      out.assign(n_win, 0.0);
      for (int x = -a; x <= a; ++x) in[x + w] = row[x + a];
      geometric_apply(in.data(), out.data(), n_win, r, inv_c, fwd, bwd);
      for (int y = -ymax; y <= ymax; ++y) {
        const int na = a + std::abs(y);
        nxt[na][y + na] += out[y + w] * std::exp(beta * std::abs(y) / 2);
      }
    }
    std::swap(cur, nxt);
    renormalise(cur, log_scale);
    const int target = L - n;
    double s = 0.0;
    for (int x = -target; x <= target; ++x) {
      s += cur[target][x + target] * std::exp((delta - beta / 2) * std::abs(x));
    }
    if (s > 0.0) {
      terms.push_back(std::log(s) + log_scale - beta * target / 2 + n * lg + beta * L);
    }
  }
  if (terms.empty()) return {};
  return LogWeight::from_log(numerics::log_sum_exp(terms));
}

// ---------------------------------------------------------------------------
// Beads

BeadDecomposition bead_decompose(const PolymerConfig& config) {
  const auto& l = config.stretches;
  const int n = static_cast<int>(l.size());
  if (n == 0) throw DomainError("empty configuration");
  BeadDecomposition d;
  d.tau.push_back(0);
  int p = 0;
  while (p < n) {
    int q = p;
    while (q < n && l[q] == 0) ++q;
    if (q == n) {
      // trailing zeros: each closes as a unit bead
      for (int i = p; i < n; ++i) {
        d.tau.push_back(i + 1);
        d.masses.push_back(1);
      }
      break;
    }
    int e = q;
    while (e + 1 < n && l[e] * l[e + 1] < 0) ++e;
    long mass = 0;
    for (int i = p; i <= e; ++i) mass += 1 + std::abs(l[i]);
    d.tau.push_back(e + 1);
    d.masses.push_back(mass);
    p = e + 1;
  }
  // largest alternating run
  for (int u = 0; u < n;) {
    int v = u;
    long mass = 1 + std::abs(l[u]);
    while (v + 1 < n && l[v] * l[v + 1] < 0) {
      ++v;
      mass += 1 + std::abs(l[v]);
    }
    d.i_max = std::max(d.i_max, mass);
    u = v + 1;
  }
  // tau_1 with l_0 = 0: leading zeros, then one stretch, then the alternating run
  int k = 0;
  while (k < n && l[k] == 0) ++k;
  int tau1;
  if (k == n) {
    tau1 = n;
  } else {
    tau1 = k + 1;
    while (tau1 < n && l[tau1 - 1] * l[tau1] < 0) ++tau1;
  }
  for (int i = 0; i < tau1; ++i) d.i_0 += 1 + std::abs(l[i]);
  return d;
}

namespace {

std::vector<LogWeight> single_bead_table(int L, double beta, double delta, int cap) {
  std::vector<LogWeight> z(L + 1);
  for (int m = 2; m <= L; ++m) z[m] = dp_Z(m, beta, delta, Constraint::SingleBead, cap);
  return z;
}

}  // namespace

std::vector<LogWeight> first_bead_Z(int L, double beta, double delta, int cap) {
  const std::vector<LogWeight> zd = single_bead_table(L, beta, delta, cap);
  const std::vector<LogWeight> z0 = delta == 0.0 ? zd : single_bead_table(L, beta, 0.0, cap);
  std::vector<LogWeight> out(L + 1);
  for (int t = 1; t <= L; ++t) {
    LogWeight acc = zd[t];
    for (int k = 1; k <= t; ++k) acc += z0[t - k];
    out[t] = acc;
  }
  return out;
}

std::vector<LogWeight> following_bead_Z(int L, double beta, int cap) {
  const std::vector<LogWeight> z0 = single_bead_table(L, beta, 0.0, cap);
  const LogWeight half = LogWeight::from_linear(0.5);
  std::vector<LogWeight> out(L + 1);
  for (int t = 1; t <= L; ++t) {
    LogWeight acc = half * z0[t];
    for (int k = 1; k <= t; ++k) acc += z0[t - k];
    out[t] = acc;
  }
  return out;
}

BeadConvolution bead_convolution_check(int L, double beta, double delta, int cap) {
  check_dp_args(L, beta, delta, cap);
  const std::vector<LogWeight> bar = first_bead_Z(L, beta, delta, cap);
  const std::vector<LogWeight> hat = following_bead_Z(L, beta, cap);
  // e[m]: compositions of m into parts > 1 weighted by prod hat Z; e[0] = 1.
  std::vector<LogWeight> e(L + 1);
  e[0] = LogWeight::one();
  for (int m = 2; m <= L; ++m) {
    for (int t = 2; t <= m; ++t) e[m] += hat[t] * e[m - t];
  }
  // zc[m] = sum_{t1 > 1} bar Z_{t1} e[m - t1]
  std::vector<LogWeight> zc(L + 1);
  for (int m = 2; m <= L; ++m) {
    for (int t = 2; t <= m; ++t) zc[m] += bar[t] * e[m - t];
  }
  BeadConvolution out;
  out.convolution = zc[L];
  out.direct = L >= 1 ? dp_Z(L, beta, delta, Constraint::EndsNonzero, cap) : LogWeight::zero();
  out.residual = log_relative_gap(out.direct, out.convolution);
  LogWeight rebuilt = LogWeight::one();  // the all-zero configuration
  for (int k = 0; k < L; ++k) rebuilt += zc[L - k];
  out.full_rebuilt = rebuilt;
  out.full_direct = dp_Z(L, beta, delta, Constraint::All, cap);
  out.full_residual = log_relative_gap(out.full_direct, out.full_rebuilt);
  return out;
}

// ---------------------------------------------------------------------------
// Auxiliary partition functions D_N

std::vector<LogWeight> aux_D_many(const std::vector<long>& areas, double beta, double delta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(delta >= 0.0 && delta < beta)) throw DomainError("D_N needs 0 <= delta < beta");
  const int n_max = static_cast<int>(areas.size());
  long a_max = 0;
  for (long a : areas) a_max = std::max(a_max, a);
  if (a_max > 20000) throw CapacityError("area exceeds the D_N table cap (20000)");
  const int A = static_cast<int>(a_max);
  std::vector<LogWeight> out(n_max + 1);
  if (A < 1) return out;
  const double r = std::exp(-beta / 2);
  const double inv_c = 1.0 / c_beta(beta);
  // v[a][x], 0 <= x <= a: P(A_n = a, X_n = x, X_i > 0) / scale; row 0 holds the start.
  std::vector<std::vector<double>> cur(A + 1), nxt(A + 1);
  for (int a = 0; a <= A; ++a) {
    cur[a].assign(a + 1, 0.0);
    nxt[a].assign(a + 1, 0.0);
  }
  cur[0][0] = 1.0;
  double log_scale = 0.0;
  std::vector<double> in, conv, fwd, bwd;
  std::vector<char> active(A + 1, 0);
  active[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    for (auto& row : nxt) std::fill(row.begin(), row.end(), 0.0);
    std::vector<char> next_active(A + 1, 0);
    for (int a = 0; a <= A - 1; ++a) {
      if (!active[a]) continue;
      const int ymax = A - a;
      const int w = std::max(a, ymax) + 1;  // window [0, w)
      in.assign(w, 0.0);
      conv.assign(w, 0.0);
      for (int x = 0; x <= a; ++x) in[x] = cur[a][x];
      geometric_apply(in.data(), conv.data(), w, r, inv_c, fwd, bwd);
      for (int y = 1; y <= ymax; ++y) {
        if (conv[y] > 0.0) {
          nxt[a + y][y] += conv[y];
          next_active[a + y] = 1;
        }
      }
    }
    std::swap(cur, nxt);
    active.swap(next_active);
    double mx = 0.0;
    for (int a = 0; a <= A; ++a) {
      if (!active[a]) continue;
      for (double v : cur[a]) mx = std::max(mx, v);
    }
    if (mx == 0.0) break;
    for (int a = 0; a <= A; ++a) {
      if (!active[a]) continue;
      for (double& v : cur[a]) v /= mx;
    }
    log_scale += std::log(mx);
    const long target = areas[n - 1];
    if (target >= 1 && target <= A && active[target]) {
      double s = 0.0;
      for (int x = 1; x <= target; ++x) s += cur[target][x] * std::exp((delta - beta / 2) * x);
      if (s > 0.0) out[n] = LogWeight::from_log(std::log(s) + log_scale);
    }
  }
  return out;
}

LogWeight aux_D_exact(int N, long area, double beta, double delta) {
  if (N < 1) throw DomainError("D_N needs N >= 1");
  if (area < 0) throw DomainError("D_N needs a nonnegative area");
  if (area < N) return {};
  std::vector<long> areas(N, 0);
  areas[N - 1] = area;
  return aux_D_many(areas, beta, delta)[N];
}

std::string to_string(AuxRegime r) {
  switch (r) {
    case AuxRegime::DC: return "DC";
    case AuxRegime::Critical: return "Critical";
    case AuxRegime::AC: return "AC";
  }
  return "?";
}

AuxCount aux_D_asymptotic(int N, long area, double beta, double delta, bool with_exact) {
  if (N < 1 || area < 1) throw DomainError("aux_D_asymptotic needs N >= 1 and area >= 1");
  AuxCount out;
  out.N = N;
  out.area = area;
  out.q = static_cast<double>(area) / (static_cast<double>(N) * N);
  const double d0 = delta0(beta, out.q);
  if (std::abs(delta - d0) < 1e-9) {
    throw RegimeError("delta within 1e-9 of delta0(q); use the critical-window evaluation");
  }
  const double ln = std::log(static_cast<double>(N));
  if (delta < d0) {
    out.regime = AuxRegime::DC;
    out.psi = psi(beta, 0.0, out.q).value;
    out.prefactor = prefactor_subcrit(beta, out.q, delta);
    out.log_pred = std::log(out.prefactor) + N * out.psi - 2.0 * ln;
  } else {
    if (!(out.q > q_star(beta, delta))) throw RegimeError("adsorbed side needs q > q*_delta");
    out.regime = AuxRegime::AC;
    out.psi = psi(beta, delta, out.q).value;
    out.prefactor = prefactor_supcrit(beta, delta, out.q);
    out.log_pred = std::log(out.prefactor) + N * out.psi - 1.5 * ln;
  }
  if (with_exact) {
    out.exact = aux_D_exact(N, area, beta, delta);
    out.log_ratio = out.exact.log() - out.log_pred;
  }
  return out;
}

AuxCount aux_D_asymptotic_critical(int N, long area, double beta, double q_base, bool with_exact) {
  if (N < 1 || area < 1) throw DomainError("aux_D_asymptotic needs N >= 1 and area >= 1");
  AuxCount out;
  out.N = N;
  out.area = area;
  out.regime = AuxRegime::Critical;
  out.q = static_cast<double>(area) / (static_cast<double>(N) * N);
  const double sn = std::sqrt(static_cast<double>(N));
  out.c_shift = (out.q - q_base) * sn;
  const double h = h_tilde(beta, q_base).value;
  const double delta = beta / 2 - h / 2;
  out.psi = psi(beta, 0.0, q_base).value;
  out.prefactor = prefactor_crit(beta, q_base, out.c_shift);
  out.log_pred = std::log(out.prefactor) + N * out.psi - h * out.c_shift * sn -
                 1.5 * std::log(static_cast<double>(N));
  if (with_exact) {
    out.exact = aux_D_exact(N, area, beta, delta);
    out.log_ratio = out.exact.log() - out.log_pred;
  }
  return out;
}

RoughBound rough_bound_check(const std::vector<int>& n_values, const std::vector<long>& areas,
                             double beta, double delta, int calibration_points) {
  if (n_values.size() != areas.size() || n_values.empty()) {
    throw DomainError("rough_bound_check needs matching, nonempty N and area lists");
  }
  if (calibration_points < 1 || calibration_points > static_cast<int>(n_values.size())) {
    throw DomainError("calibration_points out of range");
  }
  RoughBound out;
  out.n_values = n_values;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const double q = static_cast<double>(areas[i]) / (static_cast<double>(n) * n);
    const LogWeight d = aux_D_exact(n, areas[i], beta, delta);
    out.log_ratio.push_back(d.log() - n * psi(beta, delta, q).value);
  }
  double log_c = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < calibration_points; ++i) log_c = std::max(log_c, out.log_ratio[i]);
  out.constant = std::exp(log_c);
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (out.log_ratio[i] > log_c + 1e-12) {
      out.holds = false;
      out.report = fmt::format(
          "D_N exceeds c e^(N psi) at N={} area={} beta={} delta={}: log ratio {} > log c {}",
          n_values[i], areas[i], beta, delta, out.log_ratio[i], log_c);
      break;
    }
  }
  return out;
}

std::vector<LogWeight> single_bead_by_extension(int L, double beta, double delta) {
  if (L < 2) throw DomainError("a single bead needs L >= 2");
  const int n_max = L / 2;
  std::vector<long> areas(n_max);
  for (int n = 1; n <= n_max; ++n) areas[n - 1] = L - n;
  const std::vector<LogWeight> d = aux_D_many(areas, beta, delta);
  const double lg = log_gamma_beta(beta);
  std::vector<LogWeight> out(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    out[n] = d[n] * LogWeight::from_log(std::log(2.0) + n * lg + beta * L);
  }
  return out;
}

}  // namespace ipdsaw
