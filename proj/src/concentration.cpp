#include "ermsim/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ermsim {

BlockPartition blocking_partition(long n, int a, int b) {
  if (n < 1) throw std::invalid_argument("blocking_partition: n must be >= 1");
  if (a < 1) throw std::invalid_argument("blocking_partition: a must be >= 1");
  if (b < 0) throw std::invalid_argument("blocking_partition: b must be >= 0");
  const long period = static_cast<long>(a) + b;
  if (n % period != 0)
    throw NonDivisibleError("blocking_partition: (a+b) does not divide n");

  BlockPartition part;
  part.a = a;
  part.b = b;
  part.mu = n / period;
  part.odd_blocks.reserve(static_cast<std::size_t>(part.mu));
  part.gap_blocks.reserve(static_cast<std::size_t>(part.mu));
  for (long i = 0; i < part.mu; ++i) {
    part.odd_blocks.push_back({i * period, a});
    part.gap_blocks.push_back({i * period + a, b});
  }
  return part;
}

double heavy_tail_bound(double t, long n, double eta1, double eta2, double d1,
                        double d2, double c_prime) {
  if (!(t > 1.0)) throw DomainError("heavy_tail_bound: t must be > 1");
  if (!(eta2 > 2.0)) throw std::invalid_argument("heavy_tail_bound: eta2 must be > 2");
  if (!(eta1 > 0.0)) throw std::invalid_argument("heavy_tail_bound: eta1 must be > 0");
  if (!(d1 >= 0.0 && d1 <= 1.0))
    throw std::invalid_argument("heavy_tail_bound: d1 must lie in [0,1]");
  if (!(d2 >= 0.0)) throw std::invalid_argument("heavy_tail_bound: d2 must be >= 0");
  if (!(c_prime > 0.0)) throw std::invalid_argument("heavy_tail_bound: c' must be > 0");
  const double logt = std::log(t);
  const double d2logt = d2 * logt;
  if (!(d2logt > 0.0))
    throw DomainError("heavy_tail_bound: d2*log(t) must be > 0 (d2 = 0 leaves the bound undefined)");

  const double nn = static_cast<double>(n);
  const double term1 = std::pow(2.0, eta2 + 3.0) /
                       std::pow(d2logt, (1.0 - eta2) / eta1) * nn /
                       std::pow(t, 1.0 + d1 * (eta2 - 1.0));
  const double term2 = 8.0 * nn / std::pow(t, 1.0 + c_prime * d2);
  const double term3 =
      2.0 * std::exp(-std::pow(t, 2.0 - 2.0 * d1) *
                     std::pow(d2logt, 1.0 / eta1) / (9.0 * nn));
  return term1 + term2 + term3;
}

double rio_bound(double t, long n, double eta, double v, double c1, double c2,
                 double c3, double c4) {
  if (!(t > 1.0)) throw DomainError("rio_bound: t must be > 1");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("rio_bound: eta must lie in (0,1)");
  if (!(v > 0.0)) throw std::invalid_argument("rio_bound: v must be > 0");
  if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && c4 > 0.0))
    throw std::invalid_argument("rio_bound: constants must be > 0");

  const double nn = static_cast<double>(n);
  const double term1 = nn * std::exp(-std::pow(t, eta) / c1);
  const double term2 = std::exp(-t * t / (c2 * nn * v));
  const double inner =
      std::exp(std::pow(t, eta * (1.0 - eta)) / (c4 * std::pow(std::log(t), eta)));
  const double term3 = std::exp(-(t * t / (c3 * nn)) * inner);
  return term1 + term2 + term3;
}

double estimate_v(std::span<const double> w, std::span<const double> m_grid,
                  int max_lag) {
  if (w.empty()) throw std::invalid_argument("estimate_v: empty series");
  const long n = static_cast<long>(w.size());
  if (max_lag < 0) throw std::invalid_argument("estimate_v: max_lag must be >= 0");
  if (n <= 2 * static_cast<long>(max_lag))
    throw std::invalid_argument("estimate_v: need n > 2*max_lag");
  if (m_grid.empty()) throw std::invalid_argument("estimate_v: empty m_grid");

  double best = 0.0;
  std::vector<double> clipped(w.size());
  for (double m : m_grid) {
    if (!(m > 0.0)) throw std::invalid_argument("estimate_v: truncation levels must be > 0");
    double mean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      clipped[i] = std::clamp(w[i], -m, m);
      mean += clipped[i];
    }
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (double x : clipped) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);

    double acov_sum = 0.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
      double c = 0.0;
      for (long i = 0; i + lag < n; ++i)
        c += (clipped[static_cast<std::size_t>(i)] - mean) *
             (clipped[static_cast<std::size_t>(i + lag)] - mean);
      acov_sum += std::abs(c / static_cast<double>(n));
    }
    best = std::max(best, var + 2.0 * acov_sum);
  }
  return best;
}

std::vector<double> default_m_grid() {
  std::vector<double> grid;
  for (double m = 1.0; m <= 4096.0; m *= 2.0) grid.push_back(m);
  return grid;
}

int default_max_lag(long n, double eta1) {
  if (n < 3) throw std::invalid_argument("default_max_lag: n too small");
  if (!(eta1 > 0.0)) throw std::invalid_argument("default_max_lag: eta1 must be > 0");
  return static_cast<int>(
      std::ceil(10.0 * std::pow(std::log(static_cast<double>(n)), 1.0 / eta1)));
}

double BoundParams::evaluate(double t, long n) const {
  if (kind == BoundKind::HeavyTail)
    return heavy_tail_bound(t, n, eta1, eta2, d1, d2, c_prime);
  return rio_bound(t, n, eta, v, c1, c2, c3, c4);
}

namespace {

struct PathResult {
  double stat = 0.0;  // sup of |partial sums|
  double mean = 0.0;  // path mean of W
};

PathResult path_statistic(const InteractionSpec& spec, long n, std::uint64_t path_seed) {
  double running = 0.0, stat = 0.0;
  if (spec.kind == InteractionKind::IidSymPareto) {
    Rng rng(path_seed);
    for (long i = 0; i < n; ++i) {
      const double w = rng.sign() * sample_pareto_plus(rng.uniform01(), spec.eta2, 1.0);
      running += w;
      stat = std::max(stat, std::abs(running));
    }
    return {stat, running / static_cast<double>(n)};
  }

  const Sample sample = generate(spec.dgp, n, path_seed);
  const int d = sample.spec.d;
  for (long i = 0; i < n; ++i) {
    double fx_star = 0.0, diff = 0.0;
    const double* row = sample.x.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) {
      fx_star += spec.dgp.theta_star[static_cast<std::size_t>(j)] * row[j];
      diff += (spec.theta[static_cast<std::size_t>(j)] -
               spec.dgp.theta_star[static_cast<std::size_t>(j)]) * row[j];
    }
    const double xi = sample.y[static_cast<std::size_t>(i)] - fx_star;
    // E[l'(xi)(f-f*)(X)] = 0: the inputs are symmetric about zero and
    // independent of the noise, so the centering term vanishes.
    running += loss_grad(spec.loss, xi) * diff;
    stat = std::max(stat, std::abs(running));
  }
  return {stat, running / static_cast<double>(n)};
}

}  // namespace

TailReport tail_verify(const InteractionSpec& spec, long n,
                       std::span<const double> t_grid, long n_mc,
                       const BoundParams& params, std::uint64_t seed,
                       int threads) {
  if (n < 1) throw std::invalid_argument("tail_verify: n must be >= 1");
  if (n_mc < 1) throw std::invalid_argument("tail_verify: n_mc must be >= 1");
  for (double t : t_grid)
    if (!(t > 1.0)) throw DomainError("tail_verify: grid thresholds must be > 1");
  if (spec.kind == InteractionKind::DgpInteraction) {
    spec.dgp.validate();
    spec.loss.validate();
    if (spec.theta.size() != static_cast<std::size_t>(spec.dgp.d))
      throw std::invalid_argument("tail_verify: theta must have d entries");
  } else if (!(spec.eta2 > 2.0)) {
    throw std::invalid_argument("tail_verify: eta2 must be > 2");
  }

  std::vector<double> stats(static_cast<std::size_t>(n_mc));
  std::vector<double> path_means(static_cast<std::size_t>(n_mc));
  const int workers = std::max(1, threads);
  std::atomic<long> next{0};
  auto run = [&]() {
    long k;
    while ((k = next.fetch_add(1)) < n_mc) {
      const PathResult pr =
          path_statistic(spec, n, derive_seed(seed, 0x7461696cULL,
                                              static_cast<std::uint64_t>(k)));
      stats[static_cast<std::size_t>(k)] = pr.stat;
      path_means[static_cast<std::size_t>(k)] = pr.mean;
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  TailReport report;
  report.params = params;
  report.n = n;
  report.n_mc = n_mc;
  report.seed = seed;
  for (double m : path_means) report.mean_w += m;
  report.mean_w /= static_cast<double>(n_mc);
  double mvar = 0.0;
  for (double m : path_means) mvar += (m - report.mean_w) * (m - report.mean_w);
  if (n_mc > 1)
    report.mean_w_se = std::sqrt(mvar / static_cast<double>(n_mc - 1) /
                                 static_cast<double>(n_mc));
  report.t_grid.assign(t_grid.begin(), t_grid.end());
  report.empirical.reserve(t_grid.size());
  report.std_error.reserve(t_grid.size());
  report.bound.reserve(t_grid.size());
  for (double t : t_grid) {
    long hits = 0;
    for (double s : stats)
      if (s >= t) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n_mc);
    report.empirical.push_back(p);
    report.std_error.push_back(
        std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_mc)));
    report.bound.push_back(params.evaluate(t, n));
  }
  return report;
}

}  // namespace ermsim
