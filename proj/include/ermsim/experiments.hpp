#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ermsim/config.hpp"
#include "ermsim/dgp.hpp"
#include "ermsim/erm.hpp"

namespace ermsim {

struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class InteractionTail { ExpTail, PolyTail };

struct ExperimentConfig {
  DgpSpec dgp;
  LossSpec loss;
  std::vector<long> n_grid;
  int replications = 1;
  std::uint64_t master_seed = 0;
  double iota = 0.05;        // rate slack, in (0, 1/4)
  double r_exponent = 0.9;   // mu-scaling exponent r in (0,1); 1-2*iota by default
  double eta1 = 1.0;         // mixing exponent
  double eta2 = 3.0;         // interaction tail exponent
  double tau = 0.5;          // small-ball threshold
  double mixing_c = 1.0;     // beta-mixing constant c in beta(k) <= exp(-c k^eta1)
  InteractionTail interaction = InteractionTail::ExpTail;
  bool norm_equivalent = false;
  int threads = 1;

  void validate() const;
};

struct ReplicationRow {
  long n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct RateRow {
  long n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q95 = 0.0;
  double std_error = 0.0;  // standard error of the mean over replications
};

struct RateResult {
  std::vector<ReplicationRow> rows;  // sorted by (n, rep)
  std::vector<RateRow> per_n;        // sorted by n
  double slope = 0.0;                // OLS slope of log(mean error) on log n
  double slope_stderr = 0.0;
  double theoretical_exponent = 0.0;
  long nonconverged = 0;
};

// Paper exponent matched to the configured regime:
//   norm-equivalence        -> -1/2 + iota
//   polynomial interaction  -> -(1 - 1/eta2)/4 + iota
//   exponential interaction -> -1/4 + iota
double theoretical_exponent(const ExperimentConfig& cfg);

// OLS of log(error) on log(n); returns (slope, stderr of slope). Requires
// at least 3 distinct n values and strictly positive errors.
std::pair<double, double> fit_loglog_slope(
    std::span<const std::pair<double, double>> pairs);

// Block-count mapping mu(N) = floor(N^r * q_hat * c^{1/eta1} / 4).
long mu_for_n(long n, double r_exponent, double q_hat, double mixing_c,
              double eta1);

// Runs the full replication grid: fresh sample per (n, rep) sub-seed, one
// ERM fit each, L2(pi) errors aggregated per n, log-log slope over the mean
// curve. Replications run on cfg.threads workers; aggregation order is fixed.
RateResult run_rates(const ExperimentConfig& cfg);

struct ComparisonRow {
  long n = 0;
  double huber_median = 0.0, squared_median = 0.0;
  double huber_q95 = 0.0, squared_q95 = 0.0;
  double median_ratio = 0.0;  // Huber / Squared
  double q95_ratio = 0.0;
};

struct ComparisonReport {
  RateResult huber;
  RateResult squared;
  std::vector<ComparisonRow> per_n;
};

// Runs run_rates for two configs that must differ only in the loss.
ComparisonReport run_huber_vs_squared(const ExperimentConfig& huber_cfg,
                                      const ExperimentConfig& squared_cfg);

// Config-file loaders (flat key=value sections; see fixtures/ for examples).
DgpSpec dgp_from_config(const Config& cfg);
LossSpec loss_from_config(const Config& cfg, const DgpSpec& dgp);
ExperimentConfig experiment_from_config(const Config& cfg);

}  // namespace ermsim
