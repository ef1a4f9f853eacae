#include "ermsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ermsim/risk.hpp"

namespace ermsim {

void ExperimentConfig::validate() const {
  dgp.validate();
  loss.validate();
  if (n_grid.empty()) throw std::invalid_argument("experiment.n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw std::invalid_argument("experiment.n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("experiment.n_grid must be strictly increasing");
  }
  if (replications < 1)
    throw std::invalid_argument("experiment.replications must be >= 1");
  if (!(iota > 0.0 && iota < 0.25))
    throw std::invalid_argument("experiment.iota must lie in (0, 1/4)");
  if (!(r_exponent > 0.0 && r_exponent < 1.0))
    throw std::invalid_argument("experiment.r_exponent must lie in (0,1)");
  if (!(eta1 > 0.0)) throw std::invalid_argument("experiment.eta1 must be > 0");
  if (!(eta2 > 0.0)) throw std::invalid_argument("experiment.eta2 must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("experiment.tau must be > 0");
  if (!(mixing_c > 0.0)) throw std::invalid_argument("experiment.mixing_c must be > 0");
  if (threads < 1) throw std::invalid_argument("experiment.threads must be >= 1");
}

double theoretical_exponent(const ExperimentConfig& cfg) {
  if (cfg.norm_equivalent) return -0.5 + cfg.iota;
  if (cfg.interaction == InteractionTail::PolyTail)
    return -(1.0 - 1.0 / cfg.eta2) / 4.0 + cfg.iota;
  return -0.25 + cfg.iota;
}

std::pair<double, double> fit_loglog_slope(
    std::span<const std::pair<double, double>> pairs) {
  std::vector<double> xs;
  for (const auto& [n, err] : pairs) {
    if (!(err > 0.0))
      throw DegenerateInputError("fit_loglog_slope: errors must be > 0");
    if (!(n > 0.0))
      throw DegenerateInputError("fit_loglog_slope: n values must be > 0");
    xs.push_back(std::log(n));
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t distinct =
      static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
  if (distinct < 3)
    throw DegenerateInputError("fit_loglog_slope: need >= 3 distinct n values");

  const double k = static_cast<double>(pairs.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, err] : pairs) {
    sx += std::log(n);
    sy += std::log(err);
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, err] : pairs) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (const auto& [n, err] : pairs) {
    const double resid = std::log(err) - intercept - slope * std::log(n);
    rss += resid * resid;
  }
  double stderr_slope = 0.0;
  if (pairs.size() > 2)
    stderr_slope = std::sqrt(rss / (k - 2.0) / sxx);
  return {slope, stderr_slope};
}

long mu_for_n(long n, double r_exponent, double q_hat, double mixing_c,
              double eta1) {
  if (n < 1) throw std::invalid_argument("mu_for_n: n must be >= 1");
  const double mu = std::pow(static_cast<double>(n), r_exponent) * q_hat *
                    std::pow(mixing_c, 1.0 / eta1) / 4.0;
  return std::max(1L, static_cast<long>(std::floor(mu)));
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  // Nearest-rank quantile; the median averages the middle pair for even sizes.
  const std::size_t k = sorted.size();
  if (q == 0.5 && k % 2 == 0)
    return 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(k)));
  return sorted[std::min(k - 1, std::max<std::size_t>(rank, 1) - 1)];
}

}  // namespace

RateResult run_rates(const ExperimentConfig& cfg) {
  cfg.validate();
  const StationaryCov cov = stationary_cov(cfg.dgp);

  const std::size_t n_count = cfg.n_grid.size();
  const std::size_t total =
      n_count * static_cast<std::size_t>(cfg.replications);
  RateResult result;
  result.rows.assign(total, ReplicationRow{});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::size_t task;
    while ((task = next.fetch_add(1)) < total) {
      const std::size_t ni = task / static_cast<std::size_t>(cfg.replications);
      const int rep = static_cast<int>(task % static_cast<std::size_t>(cfg.replications));
      const long n = cfg.n_grid[ni];
      const std::uint64_t seed =
          derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(rep));
      const Sample sample = generate(cfg.dgp, n, seed);
      const FitResult fit = erm_fit(sample, cfg.loss, cfg.dgp.R);
      ReplicationRow& row = result.rows[task];
      row.n = n;
      row.rep = rep;
      row.seed = seed;
      row.error = l2_error(fit.theta_hat, cfg.dgp.theta_star, cov);
      row.objective = fit.objective;
      row.iterations = fit.iterations;
      row.converged = fit.converged;
    }
  };
  if (cfg.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<std::pair<double, double>> slope_pairs;
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(cfg.replications));
    double sum = 0.0;
    for (int rep = 0; rep < cfg.replications; ++rep) {
      const ReplicationRow& row =
          result.rows[ni * static_cast<std::size_t>(cfg.replications) +
                      static_cast<std::size_t>(rep)];
      errors.push_back(row.error);
      sum += row.error;
      if (!row.converged) ++result.nonconverged;
    }
    std::sort(errors.begin(), errors.end());
    RateRow agg;
    agg.n = cfg.n_grid[ni];
    agg.mean = sum / static_cast<double>(errors.size());
    agg.median = quantile_sorted(errors, 0.5);
    agg.q95 = quantile_sorted(errors, 0.95);
    double var = 0.0;
    for (double e : errors) var += (e - agg.mean) * (e - agg.mean);
    if (errors.size() > 1)
      agg.std_error = std::sqrt(var / static_cast<double>(errors.size() - 1) /
                                static_cast<double>(errors.size()));
    result.per_n.push_back(agg);
    slope_pairs.emplace_back(static_cast<double>(agg.n), agg.mean);
  }

  if (slope_pairs.size() >= 3) {
    const auto [slope, se] = fit_loglog_slope(slope_pairs);
    result.slope = slope;
    result.slope_stderr = se;
  }
  result.theoretical_exponent = theoretical_exponent(cfg);
  return result;
}

ComparisonReport run_huber_vs_squared(const ExperimentConfig& huber_cfg,
                                      const ExperimentConfig& squared_cfg) {
  if (huber_cfg.loss.kind != LossKind::Huber ||
      squared_cfg.loss.kind != LossKind::Squared)
    throw std::invalid_argument(
        "run_huber_vs_squared: configs must carry Huber and Squared losses");
  ExperimentConfig probe = squared_cfg;
  probe.loss = huber_cfg.loss;
  if (probe.n_grid != huber_cfg.n_grid ||
      probe.replications != huber_cfg.replications ||
      probe.master_seed != huber_cfg.master_seed ||
      probe.dgp.kind != huber_cfg.dgp.kind || probe.dgp.d != huber_cfg.dgp.d)
    throw std::invalid_argument(
        "run_huber_vs_squared: configs must differ only in the loss");

  ComparisonReport report;
  report.huber = run_rates(huber_cfg);
  report.squared = run_rates(squared_cfg);
  for (std::size_t i = 0; i < report.huber.per_n.size(); ++i) {
    const RateRow& h = report.huber.per_n[i];
    const RateRow& s = report.squared.per_n[i];
    ComparisonRow row;
    row.n = h.n;
    row.huber_median = h.median;
    row.squared_median = s.median;
    row.huber_q95 = h.q95;
    row.squared_q95 = s.q95;
    row.median_ratio = s.median > 0.0 ? h.median / s.median : 0.0;
    row.q95_ratio = s.q95 > 0.0 ? h.q95 / s.q95 : 0.0;
    report.per_n.push_back(row);
  }
  return report;
}

DgpSpec dgp_from_config(const Config& cfg) {
  DgpSpec spec;
  spec.kind = dgp_kind_from_string(cfg.get_string("dgp.kind"));
  spec.d = static_cast<int>(cfg.get_long("dgp.d"));
  spec.dependence = cfg.get_double("dgp.dependence", 0.0);
  spec.tail = cfg.get_double("dgp.tail", 1.0);
  if (cfg.has("dgp.pareto_scales")) spec.pareto_scales = cfg.get_doubles("dgp.pareto_scales");
  spec.theta_star = cfg.get_doubles("dgp.theta_star");
  spec.R = cfg.get_double("dgp.R");
  spec.burn_in = static_cast<int>(cfg.get_long("dgp.burn_in", 1000));
  spec.noise.kind = noise_kind_from_string(cfg.get_string("dgp.noise.kind", "Gaussian"));
  spec.noise.scale = cfg.get_double("dgp.noise.scale", 1.0);
  spec.noise.tail = cfg.get_double("dgp.noise.tail", 1.0);
  spec.validate();
  return spec;
}

LossSpec loss_from_config(const Config& cfg, const DgpSpec& dgp) {
  LossSpec loss;
  loss.kind = loss_kind_from_string(cfg.get_string("loss.kind", "Squared"));
  // T_h defaults to 3x the noise standard deviation; overridable.
  loss.huber_threshold =
      cfg.get_double("loss.huber_threshold", 3.0 * dgp.noise.sd());
  loss.validate();
  return loss;
}

ExperimentConfig experiment_from_config(const Config& cfg) {
  ExperimentConfig exp;
  exp.dgp = dgp_from_config(cfg);
  exp.loss = loss_from_config(cfg, exp.dgp);
  exp.n_grid = cfg.get_longs("experiment.n_grid");
  exp.replications = static_cast<int>(cfg.get_long("experiment.replications", 1));
  exp.master_seed = cfg.get_u64("experiment.master_seed", 0);
  exp.iota = cfg.get_double("experiment.iota", 0.05);
  exp.r_exponent = cfg.get_double("experiment.r_exponent", 1.0 - 2.0 * exp.iota);
  exp.eta1 = cfg.get_double("experiment.eta1", 1.0);
  exp.eta2 = cfg.get_double("experiment.eta2", 3.0);
  exp.tau = cfg.get_double("experiment.tau", 0.5);
  exp.mixing_c = cfg.get_double("experiment.mixing_c", 1.0);
  const std::string tail = cfg.get_string("experiment.interaction", "ExpTail");
  if (tail == "ExpTail")
    exp.interaction = InteractionTail::ExpTail;
  else if (tail == "PolyTail")
    exp.interaction = InteractionTail::PolyTail;
  else
    cfg.fail("experiment.interaction", "expected ExpTail or PolyTail");
  exp.norm_equivalent = cfg.get_bool("experiment.norm_equivalent", false);
  exp.threads = static_cast<int>(cfg.get_long("experiment.threads", 1));
  exp.validate();
  return exp;
}

}  // namespace ermsim
