#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ermsim/dgp.hpp"
#include "ermsim/erm.hpp"

namespace ermsim {

struct NonDivisibleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Interleaved blocking of 1..n into mu odd blocks of length a and mu gap
// blocks of length b, with mu*(a+b) = n exactly. Ranges are 0-based
// half-open.
struct BlockPartition {
  struct Range {
    long begin = 0;
    long len = 0;
  };
  int a = 1;
  int b = 0;
  long mu = 0;
  std::vector<Range> odd_blocks;  // S_a
  std::vector<Range> gap_blocks;  // S_b (length-0 ranges when b == 0)
};

BlockPartition blocking_partition(long n, int a, int b);

// Three-term tail bound for sup_{j<=n} |sum_{i<=j} W_i| under polynomial
// interaction tails:
//   2^{eta2+3} / (d2 ln t)^{(1-eta2)/eta1} * n / t^{1+d1(eta2-1)}
//   + 8n / t^{1+c'*d2}
//   + 2 exp(-t^{2-2d1} (d2 ln t)^{1/eta1} / (9n)).
// Requires t > 1 and d2*ln t > 0 (the first and third terms are undefined at
// d2 = 0).
double heavy_tail_bound(double t, long n, double eta1, double eta2, double d1,
                        double d2, double c_prime);

// Three-term Bernstein-type bound for exponentially tailed interactions:
//   n exp(-t^eta / c1) + exp(-t^2 / (c2 n v))
//   + exp(-(t^2/(c3 n)) exp(t^{eta(1-eta)} / (c4 (ln t)^eta))).
// Constants are caller-supplied. Requires t > 1.
double rio_bound(double t, long n, double eta, double v, double c1, double c2,
                 double c3, double c4);

// Plug-in estimator of the clipped long-run variance proxy: for each
// truncation level M, clip the series at +-M and compute the sample variance
// plus twice the absolute autocovariances up to max_lag; return the maximum
// over the grid.
double estimate_v(std::span<const double> w, std::span<const double> m_grid,
                  int max_lag);

std::vector<double> default_m_grid();             // {1, 2, 4, ..., 4096}
int default_max_lag(long n, double eta1);         // ceil(10 (ln n)^{1/eta1})

enum class InteractionKind { DgpInteraction, IidSymPareto };

// The interaction series W_i whose sup-of-partial-sums tail is verified.
// DgpInteraction: W_i = loss'(xi_i) * (theta - theta*) . X_i with xi the
// regression noise of a generated sample (mean zero since the inputs are
// symmetric and independent of the noise). IidSymPareto: W_i iid symmetric
// Pareto with survival 1/(1+t^eta2) on |W|.
struct InteractionSpec {
  InteractionKind kind = InteractionKind::IidSymPareto;
  DgpSpec dgp;
  std::vector<double> theta;
  LossSpec loss;
  double eta2 = 3.0;
};

enum class BoundKind { HeavyTail, Rio };

struct BoundParams {
  BoundKind kind = BoundKind::HeavyTail;
  // heavy_tail_bound inputs
  double eta1 = 1.0;
  double eta2 = 3.0;
  double d1 = 0.25;
  double d2 = 0.5;
  double c_prime = 1.0 / 3.0;  // tau-mixing rate constant; 1/3 matches the
                               // semi-Pareto chain's beta(k) <= e^{-k/3}
  // rio_bound inputs
  double eta = 0.5;
  double v = 1.0;
  double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0;

  double evaluate(double t, long n) const;
};

struct TailReport {
  std::vector<double> t_grid;
  std::vector<double> empirical;  // P(sup_{j<=n} |sum_{i<=j} W_i| >= t)
  std::vector<double> std_error;  // binomial MC standard errors
  std::vector<double> bound;
  BoundParams params;
  long n = 0;
  long n_mc = 0;
  std::uint64_t seed = 0;
  double mean_w = 0.0;     // grand mean of the simulated W values
  double mean_w_se = 0.0;  // standard error across independent paths
};

// Simulates n_mc independent length-n interaction paths, records the
// sup-of-partial-sums statistic per path, and pairs the empirical tail on
// t_grid with the analytic bound. MC paths use independent sub-streams and
// may be evaluated on several threads; assembly is order-fixed.
TailReport tail_verify(const InteractionSpec& spec, long n,
                       std::span<const double> t_grid, long n_mc,
                       const BoundParams& params, std::uint64_t seed,
                       int threads = 1);

}  // namespace ermsim
