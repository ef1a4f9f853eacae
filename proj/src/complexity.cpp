#include "ermsim/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ermsim/risk.hpp"

namespace ermsim {

namespace {

// Dual objective lambda*rho + r*||q(lambda)||_2 with
// q_j = max(|w_j| - lambda, 0) / scale_j.
double dual_value(std::span<const double> w, double rho, double r,
                  std::span<const double> scale, double lambda) {
  double s2 = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double q = std::max(std::abs(w[j]) - lambda, 0.0);
    const double qs = q / scale[j];
    s2 += qs * qs;
  }
  return lambda * rho + r * std::sqrt(s2);
}

// Sign of d/dlambda [lambda*rho + r*||q(lambda)||_2]; the derivative is
// rho - r * sum(q_j / scale_j^2 over active) / ||q||_2.
double dual_derivative(std::span<const double> w, double rho, double r,
                       std::span<const double> scale, double lambda) {
  double s2 = 0.0, num = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double q = std::max(std::abs(w[j]) - lambda, 0.0);
    const double qs = q / scale[j];
    s2 += qs * qs;
    num += qs / scale[j];
  }
  if (s2 == 0.0) return rho;  // past max|w|: slope rho
  return rho - r * num / std::sqrt(s2);
}

double sup_linear_impl(std::span<const double> w, double rho, double r,
                       std::span<const double> scale) {
  if (!(rho > 0.0) || !(r > 0.0))
    throw std::invalid_argument("sup_linear: rho and r must be > 0");
  if (scale.size() != w.size())
    throw std::invalid_argument("sup_linear: scale size mismatch");
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  if (wmax == 0.0) return 0.0;

  if (dual_derivative(w, rho, r, scale, 0.0) >= 0.0)
    return dual_value(w, rho, r, scale, 0.0);  // l1 constraint slack

  double lo = 0.0, hi = wmax;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dual_derivative(w, rho, r, scale, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * wmax) break;
  }
  return dual_value(w, rho, r, scale, 0.5 * (lo + hi));
}

const std::vector<double>& unit_scale(std::size_t d) {
  thread_local std::vector<double> ones;
  if (ones.size() != d) ones.assign(d, 1.0);
  return ones;
}

}  // namespace

double sup_linear_l1_l2(std::span<const double> w, double rho, double r) {
  return sup_linear_impl(w, rho, r, unit_scale(w.size()));
}

double sup_linear_l1_ellipsoid(std::span<const double> w, double rho, double r,
                               std::span<const double> scale) {
  for (double s : scale)
    if (!(s > 0.0))
      throw std::invalid_argument("sup_linear_l1_ellipsoid: scales must be > 0");
  return sup_linear_impl(w, rho, r, scale);
}

namespace {

// Shared localization solver. Given frozen weight vectors w_k and the class
// {<t,.> : ||t||_1 <= rho} with L2(pi) metric scales, computes
// omega = inf{r : phi(r) <= gamma*r} for phi(r) = mean_k sup_{class cap rD}.
struct LocalizationProblem {
  std::vector<std::vector<double>> weights;
  std::vector<double> scale;
  double rho = 0.0;

  double phi(double r) const {
    double total = 0.0;
    for (const auto& w : weights)
      total += sup_linear_impl(w, rho, r, scale);
    return total / static_cast<double>(weights.size());
  }

  // Standard error of phi at radius r.
  double phi_se(double r) const {
    double mean = 0.0, m2 = 0.0;
    long k = 0;
    for (const auto& w : weights) {
      const double v = sup_linear_impl(w, rho, r, scale);
      ++k;
      const double delta = v - mean;
      mean += delta / static_cast<double>(k);
      m2 += delta * (v - mean);
    }
    if (k < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
  }

  ComplexityEstimate solve(double gamma) const {
    ComplexityEstimate est;
    est.n_mc = static_cast<long>(weights.size());
    if (rho == 0.0) return est;  // degenerate class {0}

    // Small-r slope of phi: the l2 ball binds, phi(r) = r * mean||w_j/s_j||_2.
    double slope0 = 0.0;
    for (const auto& w : weights) {
      double s2 = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        const double q = w[j] / scale[j];
        s2 += q * q;
      }
      slope0 += std::sqrt(s2);
    }
    slope0 /= static_cast<double>(weights.size());
    if (slope0 <= gamma) return est;  // satisfied at every r

    double smax = 0.0;
    for (double s : scale) smax = std::max(smax, s);
    const double class_radius = rho * smax;
    const double phi_cap = phi(class_radius);
    double hi = std::max(class_radius, phi_cap / gamma) * (1.0 + 1e-9);
    double lo = 0.0;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      est.r_grid.push_back(mid);
      if (phi(mid) > gamma * mid)
        lo = mid;
      else
        hi = mid;
    }
    est.value = 0.5 * (lo + hi);
    est.std_error = phi_se(est.value) / gamma;
    return est;
  }
};

}  // namespace

namespace {

LocalizationProblem rademacher_problem(const DgpSpec& spec, int mu, long n_mc,
                                       std::uint64_t seed) {
  if (mu < 1) throw std::invalid_argument("omega_mu: mu must be >= 1");
  if (n_mc < 1) throw std::invalid_argument("omega_mu: n_mc must be >= 1");

  const std::size_t d = static_cast<std::size_t>(spec.d);
  const StationaryCov cov = stationary_cov(spec);

  LocalizationProblem prob;
  prob.rho = 2.0 * spec.R;  // difference class F - F
  prob.scale.resize(d);
  for (std::size_t j = 0; j < d; ++j) prob.scale[j] = std::sqrt(cov.diag[j]);

  prob.weights.assign(static_cast<std::size_t>(n_mc), std::vector<double>(d));
  std::vector<double> draw(d);
  for (long k = 0; k < n_mc; ++k) {
    Rng rng(derive_seed(seed, 0x6f6d6567ULL, static_cast<std::uint64_t>(k)));
    auto& w = prob.weights[static_cast<std::size_t>(k)];
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < mu; ++i) {
      stationary_draw(spec, rng, draw);
      const double eps = rng.sign();
      for (std::size_t j = 0; j < d; ++j) w[j] += eps * draw[j];
    }
    for (std::size_t j = 0; j < d; ++j) w[j] /= static_cast<double>(mu);
  }
  return prob;
}

}  // namespace

ComplexityEstimate omega_mu_estimate(const DgpSpec& spec, int mu, double gamma,
                                     long n_mc, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("omega_mu_estimate: gamma must be > 0");
  return rademacher_problem(spec, mu, n_mc, seed).solve(gamma);
}

ComplexityEstimate rademacher_width_estimate(const DgpSpec& spec, int mu,
                                             double r, long n_mc,
                                             std::uint64_t seed) {
  if (!(r > 0.0))
    throw std::invalid_argument("rademacher_width_estimate: r must be > 0");
  const LocalizationProblem prob = rademacher_problem(spec, mu, n_mc, seed);
  ComplexityEstimate est;
  est.n_mc = n_mc;
  if (prob.rho == 0.0) return est;
  est.value = prob.phi(r);
  est.std_error = prob.phi_se(r);
  est.r_grid = {r};
  return est;
}

ComplexityEstimate small_ball_estimate(const DgpSpec& spec, double u, int n_dir,
                                       long n_mc, std::uint64_t seed) {
  if (!(u > 0.0)) throw std::invalid_argument("small_ball_estimate: u must be > 0");
  if (n_dir < 1) throw std::invalid_argument("small_ball_estimate: n_dir must be >= 1");
  if (n_mc < 1) throw std::invalid_argument("small_ball_estimate: n_mc must be >= 1");

  const std::size_t d = static_cast<std::size_t>(spec.d);
  const StationaryCov cov = stationary_cov(spec);

  double best = 1.0, best_se = 0.0;
  std::vector<double> theta(d), draw(d);
  for (int dir = 0; dir < n_dir; ++dir) {
    Rng dir_rng(derive_seed(seed, 0x64697273ULL, static_cast<std::uint64_t>(dir)));
    double norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      theta[j] = dir_rng.normal();
      norm2 += theta[j] * theta[j];
    }
    const double norm = std::sqrt(norm2);
    double l2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      theta[j] /= norm;
      l2 += cov.diag[j] * theta[j] * theta[j];
    }
    const double threshold = u * std::sqrt(l2);

    Rng mc_rng(derive_seed(seed, 0x73626d63ULL, static_cast<std::uint64_t>(dir)));
    long hits = 0;
    for (long i = 0; i < n_mc; ++i) {
      stationary_draw(spec, mc_rng, draw);
      double proj = 0.0;
      for (std::size_t j = 0; j < d; ++j) proj += theta[j] * draw[j];
      if (std::abs(proj) >= threshold) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_mc);
    if (p <= best) {
      best = p;
      best_se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_mc));
    }
  }

  ComplexityEstimate est;
  est.value = best;
  est.std_error = best_se;
  est.n_mc = n_mc;
  return est;
}

namespace {

LocalizationProblem gaussian_problem(const DgpSpec& spec, double rho, long n_mc,
                                     std::uint64_t seed) {
  const std::size_t d = static_cast<std::size_t>(spec.d);
  const StationaryCov cov = stationary_cov(spec);
  LocalizationProblem prob;
  prob.rho = rho;
  prob.scale.resize(d);
  for (std::size_t j = 0; j < d; ++j) prob.scale[j] = std::sqrt(cov.diag[j]);
  prob.weights.assign(static_cast<std::size_t>(n_mc), std::vector<double>(d));
  for (long k = 0; k < n_mc; ++k) {
    Rng rng(derive_seed(seed, 0x67777964ULL, static_cast<std::uint64_t>(k)));
    auto& w = prob.weights[static_cast<std::size_t>(k)];
    for (std::size_t j = 0; j < d; ++j) w[j] = prob.scale[j] * rng.normal();
  }
  return prob;
}

}  // namespace

ComplexityEstimate gaussian_width_estimate(const DgpSpec& spec, double r,
                                           long n_mc, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("gaussian_width_estimate: r must be > 0");
  if (n_mc < 1) throw std::invalid_argument("gaussian_width_estimate: n_mc must be >= 1");

  const LocalizationProblem prob = gaussian_problem(spec, spec.R, n_mc, seed);
  ComplexityEstimate est;
  est.n_mc = n_mc;
  if (prob.rho == 0.0) return est;
  est.value = prob.phi(r);
  est.std_error = prob.phi_se(r);
  est.r_grid = {r};
  return est;
}

ComplexityEstimate omega_1_estimate(const DgpSpec& spec, long n, double eta1,
                                    double zeta1, long n_mc, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("omega_1_estimate: n must be >= 1");
  if (!(eta1 > 0.0) || !(zeta1 > 0.0))
    throw std::invalid_argument("omega_1_estimate: eta1 and zeta1 must be > 0");
  const double gamma =
      zeta1 * std::pow(static_cast<double>(n), eta1 / (2.0 * (1.0 + eta1)));
  return gaussian_problem(spec, spec.R, n_mc, seed).solve(gamma);
}

ComplexityEstimate omega_q_estimate(const DgpSpec& spec, long n, double eta1,
                                    double zeta1, double zeta2, long n_mc,
                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("omega_q_estimate: n must be >= 1");
  if (!(eta1 > 0.0) || !(zeta1 > 0.0) || !(zeta2 > 0.0))
    throw std::invalid_argument("omega_q_estimate: eta1, zeta1, zeta2 must be > 0");

  const double gamma1 =
      zeta1 * std::pow(static_cast<double>(n), eta1 / (2.0 * (1.0 + eta1)));
  ComplexityEstimate w1 =
      gaussian_problem(spec, 2.0 * spec.R, n_mc, seed).solve(gamma1);

  const int mu = std::max(
      1, static_cast<int>(std::pow(static_cast<double>(n), eta1 / (1.0 + eta1))));
  ComplexityEstimate w2 = omega_mu_estimate(spec, mu, zeta2, n_mc,
                                            derive_seed(seed, 0x71772932ULL));
  return w1.value >= w2.value ? w1 : w2;
}

double theory_bound_subweibull(double R, double d, double eta, double mu,
                               const SubWeibullBoundConstants& c) {
  if (!(R >= 0.0) || !(d >= 1.0) || !(eta > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("theory_bound_subweibull: parameters must be positive");
  if (mu > c.c1 * d) return 0.0;
  const double logterm = std::pow(std::log(std::exp(1.0) * d), 1.0 / eta);
  return c.c3 * c.k1 * R * logterm / std::sqrt(mu);
}

double theory_bound_pareto(double R, double d, double eta2, double iota,
                           double n, double tau, double q, double c9) {
  if (!(eta2 > 2.0)) throw std::invalid_argument("theory_bound_pareto: eta2 must be > 2");
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("theory_bound_pareto: q must lie in (0,1]");
  if (!(R >= 0.0) || !(d >= 1.0) || !(n > 0.0) || !(tau > 0.0) || !(iota >= 0.0))
    throw std::invalid_argument("theory_bound_pareto: parameters must be positive");
  const double dim_exp = 1.0 / (eta2 - 0.5 * iota) + iota / 8.0;
  return c9 * R / (tau * std::pow(q, 1.5)) * std::pow(d, dim_exp) *
         std::pow(n, -0.5 + iota);
}

}  // namespace ermsim
