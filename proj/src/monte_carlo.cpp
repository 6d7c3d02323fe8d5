#include "ipdsaw/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ipdsaw/exact_engine.hpp"
#include "ipdsaw/numerics.hpp"

namespace ipdsaw {

namespace {

enum Move { kTransfer = 0, kFlip = 1, kSplit = 2, kMerge = 3 };

long sgn(long x) { return (x > 0) - (x < 0); }

class Chain {
 public:
  Chain(const ChainConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    const int n0 = std::max(1, static_cast<int>(std::lround(std::sqrt(cfg.L))));
    const long rest = cfg.L - n0;
    l_.assign(n0, 0);
    for (int i = 0; i < n0; ++i) {
      const long mag = rest / n0 + (i < rest % n0 ? 1 : 0);
      l_[i] = (i % 2 == 0) ? mag : -mag;
    }
    energy_ = hamiltonian(PolymerConfig{l_}, cfg.beta, cfg.delta);
    const double total = cfg.moves.transfer + cfg.moves.flip + cfg.moves.split_merge;
    if (!(total > 0.0)) throw DomainError("move weights must not all vanish");
    p_transfer_ = cfg.moves.transfer / total;
    p_flip_ = cfg.moves.flip / total;
  }

  void step(ObservableTrace& tr) {
    const double u = unif_(rng_);
    if (u < p_transfer_) {
      record(tr, kTransfer, transfer());
    } else if (u < p_transfer_ + p_flip_) {
      record(tr, kFlip, flip());
    } else if (unif_(rng_) < 0.5) {
      record(tr, kSplit, split());
    } else {
      record(tr, kMerge, merge());
    }
  }

  const std::vector<long>& stretches() const { return l_; }
  double energy() const { return energy_; }

 private:
  double contact(long a, long b) const {
    return a * b < 0 ? cfg_.beta * static_cast<double>(std::min(std::abs(a), std::abs(b))) : 0.0;
  }
  double pair(long p) const {
    if (p < 0 || p + 1 >= static_cast<long>(l_.size())) return 0.0;
    return contact(l_[p], l_[p + 1]);
  }
  long at(long i) const {
    return (i < 0 || i >= static_cast<long>(l_.size())) ? 0 : l_[i];
  }
  bool metropolis(double d_energy, double hastings) {
    const double a = std::exp(d_energy) * hastings;
    return a >= 1.0 || unif_(rng_) < a;
  }
  long pick(long n) { return std::uniform_int_distribution<long>(0, n - 1)(rng_); }
  long pick_sign() { return pick(2) == 0 ? 1 : -1; }

  static void record(ObservableTrace& tr, Move m, bool acc) {
    ++tr.proposals;
    ++tr.proposed_by_move[m];
    if (acc) {
      ++tr.accepted;
      ++tr.accepted_by_move[m];
    }
  }

  // Local energy of the pairs touching i and j plus the wall term.
  double local(long i, long j) const {
    long ps[4] = {i - 1, i, j - 1, j};
    std::sort(ps, ps + 4);
    double e = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (k > 0 && ps[k] == ps[k - 1]) continue;
      e += pair(ps[k]);
    }
    return e + cfg_.delta * static_cast<double>(std::abs(l_[0]));
  }

  bool transfer() {
    const long n = static_cast<long>(l_.size());
    if (n < 2) return false;
    const long i = pick(n);
    long j = pick(n - 1);
    if (j >= i) ++j;
    const long si = pick_sign(), sj = pick_sign();
    const long ni = l_[i] + si, nj = l_[j] + sj;
    if (std::abs(ni) + std::abs(nj) != std::abs(l_[i]) + std::abs(l_[j])) return false;
    const double before = local(i, j);
    const long oi = l_[i], oj = l_[j];
    l_[i] = ni;
    l_[j] = nj;
    const double after = local(i, j);
    if (metropolis(after - before, 1.0)) {
      energy_ += after - before;
      return true;
    }
    l_[i] = oi;
    l_[j] = oj;
    return false;
  }

  bool flip() {
    const long i = pick(static_cast<long>(l_.size()));
    if (l_[i] == 0) return true;
    const double before = pair(i - 1) + pair(i);
    l_[i] = -l_[i];
    const double after = pair(i - 1) + pair(i);
    if (metropolis(after - before, 1.0)) {
      energy_ += after - before;
      return true;
    }
    l_[i] = -l_[i];
    return false;
  }

  bool split() {
    const long n = static_cast<long>(l_.size());
    const long i = pick(n);
    const long c = l_[i];
    const long m = std::abs(c);
    if (m == 0) return false;
    const long k = pick(m);
    const long a = sgn(c) * k, b = sgn(c) * (m - 1 - k);
    const double wall_old = i == 0 ? cfg_.delta * m : 0.0;
    const double wall_new = i == 0 ? cfg_.delta * std::abs(a) : 0.0;
    const double before = wall_old + contact(at(i - 1), c) + contact(c, at(i + 1));
    const double after = wall_new + contact(at(i - 1), a) + contact(a, b) + contact(b, at(i + 1));
    const double hastings = static_cast<double>(m) * (m == 1 ? 0.5 : 1.0);
    if (!metropolis(after - before, hastings)) return false;
    l_[i] = a;
    l_.insert(l_.begin() + i + 1, b);
    energy_ += after - before;
    return true;
  }

  bool merge() {
    const long n = static_cast<long>(l_.size());
    if (n < 2) return false;
    const long j = pick(n - 1);
    const long a = l_[j], b = l_[j + 1];
    if (a * b < 0) return false;
    long s = sgn(a) != 0 ? sgn(a) : sgn(b);
    if (s == 0) s = pick_sign();
    const long m = std::abs(a) + std::abs(b) + 1;
    const long c = s * m;
    const double wall_old = j == 0 ? cfg_.delta * std::abs(a) : 0.0;
    const double wall_new = j == 0 ? cfg_.delta * m : 0.0;
    const double before = wall_old + contact(at(j - 1), a) + contact(a, b) + contact(b, at(j + 2));
    const double after = wall_new + contact(at(j - 1), c) + contact(c, at(j + 2));
    const double hastings = 1.0 / (static_cast<double>(m) * (m == 1 ? 0.5 : 1.0));
    if (!metropolis(after - before, hastings)) return false;
    l_[j] = c;
    l_.erase(l_.begin() + j + 1);
    energy_ += after - before;
    return true;
  }

  ChainConfig cfg_;
  Rng rng_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::vector<long> l_;
  double energy_ = 0.0;
  double p_transfer_ = 0.0;
  double p_flip_ = 0.0;
};

void check_chain(const ChainConfig& c) {
  if (c.L < 2) throw DomainError("mcmc_run needs L >= 2");
  if (!(c.beta >= 0.0) || !std::isfinite(c.beta)) throw DomainError("beta must be >= 0");
  if (!(c.delta >= 0.0) || !std::isfinite(c.delta)) throw DomainError("delta must be >= 0");
  if (c.samples < 1 || c.burn_in_sweeps < 0 || c.thinning_sweeps < 1) {
    throw DomainError("samples >= 1, burn-in >= 0 and thinning >= 1 are required");
  }
  if (c.moves.transfer < 0 || c.moves.flip < 0 || c.moves.split_merge < 0) {
    throw DomainError("move weights must be nonnegative");
  }
}

}  // namespace

ObservableTrace mcmc_run(const ChainConfig& config, const SampleObserver& observer) {
  check_chain(config);
  Chain chain(config);
  ObservableTrace tr;
  tr.proposed_by_move.assign(4, 0);
  tr.accepted_by_move.assign(4, 0);
  const long per_sweep = config.L;
  for (long s = 0; s < config.burn_in_sweeps * per_sweep; ++s) chain.step(tr);
  tr.n_stretches.reserve(config.samples);
  for (long k = 0; k < config.samples; ++k) {
    for (long s = 0; s < config.thinning_sweeps * per_sweep; ++s) chain.step(tr);
    const auto& l = chain.stretches();
    const BeadDecomposition d = bead_decompose(PolymerConfig{l});
    tr.n_stretches.push_back(static_cast<int>(l.size()));
    tr.abs_l1.push_back(std::abs(l.front()));
    tr.i_max_frac.push_back(static_cast<double>(d.i_max) / config.L);
    tr.i_0_frac.push_back(static_cast<double>(d.i_0) / config.L);
    tr.energy.push_back(chain.energy());
    if (config.profile_bins > 0) {
      std::vector<double> bins(config.profile_bins, 0.0);
      const long n = static_cast<long>(l.size());
      for (long i = 0; i < n; ++i) {
        bins[i * config.profile_bins / n] += 1.0 + static_cast<double>(std::abs(l[i]));
      }
      tr.profile.push_back(std::move(bins));
    }
    if (observer) observer(l);
  }
  return tr;
}

std::vector<Proposal> split_merge_neighbours(const std::vector<long>& x) {
  std::vector<Proposal> out;
  const long n = static_cast<long>(x.size());
  for (long i = 0; i < n; ++i) {
    const long m = std::abs(x[i]);
    for (long k = 0; k < m; ++k) {
      Proposal p;
      p.target = x;
      p.target[i] = sgn(x[i]) * k;
      p.target.insert(p.target.begin() + i + 1, sgn(x[i]) * (m - 1 - k));
      p.hastings = static_cast<double>(m) * (m == 1 ? 0.5 : 1.0);
      out.push_back(std::move(p));
    }
  }
  for (long j = 0; j + 1 < n; ++j) {
    const long a = x[j], b = x[j + 1];
    if (a * b < 0) continue;
    const long m = std::abs(a) + std::abs(b) + 1;
    std::vector<long> signs;
    if (sgn(a) != 0 || sgn(b) != 0) {
      signs.push_back(sgn(a) != 0 ? sgn(a) : sgn(b));
    } else {
      signs = {1, -1};
    }
    for (long s : signs) {
      Proposal p;
      p.target = x;
      p.target[j] = s * m;
      p.target.erase(p.target.begin() + j + 1);
      p.hastings = 1.0 / (static_cast<double>(m) * (m == 1 ? 0.5 : 1.0));
      out.push_back(std::move(p));
    }
  }
  return out;
}

double split_merge_proposal_prob(const std::vector<long>& x, const std::vector<long>& y) {
  const long n = static_cast<long>(x.size());
  double p = 0.0;
  for (long i = 0; i < n; ++i) {
    const long m = std::abs(x[i]);
    for (long k = 0; k < m; ++k) {
      std::vector<long> t = x;
      t[i] = sgn(x[i]) * k;
      t.insert(t.begin() + i + 1, sgn(x[i]) * (m - 1 - k));
      if (t == y) p += 0.5 / n / m;
    }
  }
  for (long j = 0; j + 1 < n; ++j) {
    const long a = x[j], b = x[j + 1];
    if (a * b < 0) continue;
    const long m = std::abs(a) + std::abs(b) + 1;
    const bool both_zero = a == 0 && b == 0;
    for (long s : {1L, -1L}) {
      if (!both_zero && s != (sgn(a) != 0 ? sgn(a) : sgn(b))) continue;
      std::vector<long> t = x;
      t[j] = s * m;
      t.erase(t.begin() + j + 1);
      if (t == y) p += 0.5 / (n - 1) * (both_zero ? 0.5 : 1.0);
    }
  }
  return p;
}

MeanEstimate batch_means(const std::vector<double>& x, int batches) {
  MeanEstimate out;
  const std::size_t n = x.size();
  if (n == 0) return out;
  out.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  if (n < static_cast<std::size_t>(2 * batches)) return out;
  const std::size_t size = n / batches;
  double var_b = 0.0;
  for (int b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) m += x[i];
    m /= static_cast<double>(size);
    var_b += (m - out.mean) * (m - out.mean);
  }
  var_b /= (batches - 1);
  out.stderr_ = std::sqrt(var_b / batches);
  double var = 0.0;
  for (double v : x) var += (v - out.mean) * (v - out.mean);
  var /= static_cast<double>(n - 1);
  // statistical inefficiency: Var(mean) = tau * var / n
  out.tau = var > 0.0 ? var_b * static_cast<double>(size) / var : 1.0;
  return out;
}

Stationarity energy_stationarity(const ObservableTrace& trace) {
  const std::size_t n = trace.energy.size();
  Stationarity s;
  if (n < 60) return s;
  const std::size_t third = n / 3;
  const std::vector<double> first(trace.energy.begin(), trace.energy.begin() + third);
  const std::vector<double> last(trace.energy.end() - third, trace.energy.end());
  const MeanEstimate a = batch_means(first, 10), b = batch_means(last, 10);
  const double se = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
  s.z = se > 0.0 ? (a.mean - b.mean) / se : 0.0;
  s.ok = std::abs(s.z) < 3.0;
  return s;
}

ScalingStudy regime_scaling_study(double beta, double delta, const std::vector<int>& L_list,
                                  long samples, std::uint64_t seed, long burn_in_sweeps,
                                  long thinning_sweeps) {
  if (L_list.size() < 2) throw DomainError("scaling study needs at least two lengths");
  ScalingStudy st;
  st.beta = beta;
  st.delta = delta;
  std::vector<double> x, y, sig;
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    ChainConfig c;
    c.L = L_list[i];
    c.beta = beta;
    c.delta = delta;
    c.samples = samples;
    c.seed = seed + 7919 * i;
    c.burn_in_sweeps = burn_in_sweeps;
    c.thinning_sweeps = thinning_sweeps;
    const ObservableTrace tr = mcmc_run(c);
    std::vector<double> v(tr.abs_l1.begin(), tr.abs_l1.end());
    ScalingPoint p{c.L, batch_means(v)};
    st.points.push_back(p);
    x.push_back(std::log(static_cast<double>(c.L)));
    y.push_back(std::log(p.first_stretch.mean));
    sig.push_back(std::max(p.first_stretch.stderr_, 1e-12) / p.first_stretch.mean);
  }
  const numerics::LinearFit fit = numerics::weighted_linear_fit(x, y, sig);
  st.exponent = fit.slope;
  st.exponent_stderr = fit.slope_stderr;
  st.ci_low = fit.slope - 1.96 * fit.slope_stderr;
  st.ci_high = fit.slope + 1.96 * fit.slope_stderr;
  return st;
}

BeadMassStudy bead_mass_study(double beta, double delta, int L, int k, long samples,
                              std::uint64_t seed, long burn_in_sweeps, long thinning_sweeps) {
  ChainConfig c;
  c.L = L;
  c.beta = beta;
  c.delta = delta;
  c.samples = samples;
  c.seed = seed;
  c.burn_in_sweeps = burn_in_sweeps;
  c.thinning_sweeps = thinning_sweeps;
  const ObservableTrace tr = mcmc_run(c);
  std::vector<double> hit_max, hit_first;
  const double threshold = static_cast<double>(L - k) / L;
  for (std::size_t i = 0; i < tr.i_max_frac.size(); ++i) {
    hit_max.push_back(tr.i_max_frac[i] >= threshold - 1e-12 ? 1.0 : 0.0);
    hit_first.push_back(tr.i_0_frac[i] >= threshold - 1e-12 ? 1.0 : 0.0);
  }
  BeadMassStudy out;
  out.L = L;
  out.k = k;
  out.samples = samples;
  const MeanEstimate a = batch_means(hit_max), b = batch_means(hit_first);
  out.p_max = a.mean;
  out.p_first = b.mean;
  // binomial error inflated by the batch-means inefficiency
  const double n = static_cast<double>(samples);
  out.p_max_err = std::sqrt(std::max(a.tau, 1.0) * a.mean * (1 - a.mean) / n);
  out.p_first_err = std::sqrt(std::max(b.tau, 1.0) * b.mean * (1 - b.mean) / n);
  return out;
}

EmpiricalProfile empirical_profile(double beta, double delta, int L, long samples,
                                   std::uint64_t seed, int bins, long burn_in_sweeps,
                                   long thinning_sweeps) {
  if (bins < 1) throw DomainError("profile needs at least one bin");
  ChainConfig c;
  c.L = L;
  c.beta = beta;
  c.delta = delta;
  c.samples = samples;
  c.seed = seed;
  c.burn_in_sweeps = burn_in_sweeps;
  c.thinning_sweeps = thinning_sweeps;
  std::vector<double> sum(bins, 0.0), count(bins, 0.0);
  double ext = 0.0;
  const double sl = std::sqrt(static_cast<double>(L));
  mcmc_run(c, [&](const std::vector<long>& l) {
    const BeadDecomposition d = bead_decompose(PolymerConfig{l});
    std::size_t best = 0;
    for (std::size_t j = 1; j < d.masses.size(); ++j) {
      if (d.masses[j] > d.masses[best]) best = j;
    }
    // skip the leading zeros of the dominant bead
    int u = d.tau[best];
    const int v = d.tau[best + 1];
    while (u < v && l[u] == 0) ++u;
    const int n = v - u;
    if (n <= 0) return;
    ext += n / sl;
    for (int i = 0; i < n; ++i) {
      const int b = static_cast<int>((i + 0.5) / n * bins);
      sum[b] += static_cast<double>(std::abs(l[u + i])) / sl;
      count[b] += 1.0;
    }
  });
  EmpiricalProfile out;
  out.mean_extension = ext / static_cast<double>(samples);
  for (int b = 0; b < bins; ++b) {
    out.t_grid.push_back((b + 0.5) / bins);
    out.mean_height.push_back(count[b] > 0 ? sum[b] / count[b] : 0.0);
  }
  return out;
}

void write_trace_csv(std::ostream& os, const ObservableTrace& trace) {
  os << "sample,n_stretches,abs_l1,i_max_frac,i_0_frac,energy\n";
  for (std::size_t i = 0; i < trace.energy.size(); ++i) {
    os << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", i, trace.n_stretches[i],
                      trace.abs_l1[i], trace.i_max_frac[i], trace.i_0_frac[i], trace.energy[i]);
  }
}

}  // namespace ipdsaw
