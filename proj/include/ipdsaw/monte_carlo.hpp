#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ipdsaw/walk_law.hpp"

namespace ipdsaw {

struct MoveWeights {
  double transfer = 1.0;
  double flip = 1.0;
  double split_merge = 1.0;
};

struct ChainConfig {
  int L = 0;
  double beta = 0.0;
  double delta = 0.0;
  MoveWeights moves;
  long burn_in_sweeps = 1000;  // one sweep = L proposals
  long thinning_sweeps = 10;
  long samples = 1000;
  std::uint64_t seed = 1;
  int profile_bins = 0;        // 0 disables the per-sample binned profile
};

struct ObservableTrace {
  std::vector<int> n_stretches;
  std::vector<long> abs_l1;
  std::vector<double> i_max_frac;
  std::vector<double> i_0_frac;
  std::vector<double> energy;
  // profile[s][b]: monomers (1 + |l_i|) of the stretches falling in horizontal bin b.
  std::vector<std::vector<double>> profile;
  long proposals = 0;
  long accepted = 0;
  std::vector<long> proposed_by_move;  // transfer, flip, split, merge
  std::vector<long> accepted_by_move;
};

using SampleObserver = std::function<void(const std::vector<long>& stretches)>;

ObservableTrace mcmc_run(const ChainConfig& config, const SampleObserver& observer = {});

// Proposal-level access for reversibility tests. A proposal lists the state it
// would move to and the Hastings factor q(y -> x) / q(x -> y).
struct Proposal {
  std::vector<long> target;
  double hastings = 1.0;
};
// Every state reachable in one split or merge move, with the exact ratio.
std::vector<Proposal> split_merge_neighbours(const std::vector<long>& stretches);
// Probability of proposing y from x under the split/merge kernel alone.
double split_merge_proposal_prob(const std::vector<long>& x, const std::vector<long>& y);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // batch-means standard error
  double tau = 0.0;      // integrated autocorrelation time in samples (batch-means estimate)
};

MeanEstimate batch_means(const std::vector<double>& x, int batches = 20);

struct Stationarity {
  double z = 0.0;   // (mean of first third - mean of last third) / combined stderr
  bool ok = true;   // |z| < 3
};

Stationarity energy_stationarity(const ObservableTrace& trace);

struct ScalingPoint {
  int L = 0;
  MeanEstimate first_stretch;
};

struct ScalingStudy {
  double beta = 0.0;
  double delta = 0.0;
  std::vector<ScalingPoint> points;
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

ScalingStudy regime_scaling_study(double beta, double delta, const std::vector<int>& L_list,
                                  long samples, std::uint64_t seed, long burn_in_sweeps = 1000,
                                  long thinning_sweeps = 10);

struct BeadMassStudy {
  int L = 0;
  int k = 0;
  double p_max = 0.0;   // P(|I_max| >= L - k)
  double p_first = 0.0; // P(|I_0| >= L - k)
  double p_max_err = 0.0;
  double p_first_err = 0.0;
  long samples = 0;
};

BeadMassStudy bead_mass_study(double beta, double delta, int L, int k, long samples,
                              std::uint64_t seed, long burn_in_sweeps = 1000,
                              long thinning_sweeps = 10);

struct EmpiricalProfile {
  std::vector<double> t_grid;       // bin centres in (0, 1)
  std::vector<double> mean_height;  // mean |l_i| / sqrt(L) of the dominant bead
  double mean_extension = 0.0;      // mean bead extension / sqrt(L)
};

EmpiricalProfile empirical_profile(double beta, double delta, int L, long samples,
                                   std::uint64_t seed, int bins = 20, long burn_in_sweeps = 1000,
                                   long thinning_sweeps = 10);

void write_trace_csv(std::ostream& os, const ObservableTrace& trace);

}  // namespace ipdsaw
