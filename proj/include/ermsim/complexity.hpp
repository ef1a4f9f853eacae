#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ermsim/dgp.hpp"

namespace ermsim {

struct ComplexityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // first-order MC standard error of the estimate
  long n_mc = 0;
  std::vector<double> r_grid;  // localization radii probed by the bisection
};

// Exact sup{ <w,t> : ||t||_1 <= rho, ||t||_2 <= r }, computed by bisection on
// the l1 Lagrange multiplier of the soft-threshold dual
//   min_{lambda>=0} lambda*rho + r*||soft_lambda(w)||_2,
// to absolute tolerance 1e-10.
double sup_linear_l1_l2(std::span<const double> w, double rho, double r);

// Generalization used by the localized estimators: the l2 ball is replaced by
// the ellipsoid sum_j (scale_j t_j)^2 <= r^2 (the L2(pi) ball of a diagonal
// stationary covariance, scale_j = sqrt(Sigma_jj)).
double sup_linear_l1_ellipsoid(std::span<const double> w, double rho, double r,
                               std::span<const double> scale);

// Blocked local Rademacher complexity of the difference class
// {<t,.> : ||t||_1 <= 2R} intersected with the L2(pi) ball of radius r:
// draws n_mc batches of mu iid stationary inputs and Rademacher signs, then
// finds inf{r > 0 : E[sup]/r <= gamma} by bisection (the map r -> E[sup]/r is
// non-increasing for a star-shaped class). Common random numbers are used
// across radii, so the result is a deterministic function of (inputs, seed).
ComplexityEstimate omega_mu_estimate(const DgpSpec& spec, int mu, double gamma,
                                     long n_mc, std::uint64_t seed);

// Small-ball probability estimate: min over n_dir random unit directions of
// the MC estimate of P(|theta.X| >= u * ||theta.X||_{L2}). The minimum over
// a finite direction sample upper-bounds the class infimum Q.
ComplexityEstimate small_ball_estimate(const DgpSpec& spec, double u, int n_dir,
                                       long n_mc, std::uint64_t seed);

// Localized Gaussian width at fixed radius r for the class
// {<t,.> : ||t||_1 <= R}: MC mean of sup <g,t> over the class intersected
// with the L2(pi) ball of radius r, with g ~ N(0, Sigma).
ComplexityEstimate gaussian_width_estimate(const DgpSpec& spec, double r,
                                           long n_mc, std::uint64_t seed);

// Blocked Rademacher average of the difference class at a fixed localization
// radius (the quantity whose r-crossing defines omega_mu). Same weights as
// omega_mu_estimate at the same seed.
ComplexityEstimate rademacher_width_estimate(const DgpSpec& spec, int mu,
                                             double r, long n_mc,
                                             std::uint64_t seed);

// omega_1: inf{r > 0 : E||G||_{H cap rD} <= zeta1 * r * n^{eta1/(2(1+eta1))}}
// for H = {<t,.> : ||t||_1 <= R}, by the same bisection wrapper.
ComplexityEstimate omega_1_estimate(const DgpSpec& spec, long n, double eta1,
                                    double zeta1, long n_mc, std::uint64_t seed);

// omega_Q = max(omega_1, omega_2) over the difference class (l1 radius 2R),
// with omega_2 the blocked Rademacher measure at mu = floor(n^{eta1/(1+eta1)}).
ComplexityEstimate omega_q_estimate(const DgpSpec& spec, long n, double eta1,
                                    double zeta1, double zeta2, long n_mc,
                                    std::uint64_t seed);

struct SubWeibullBoundConstants {
  double c1 = 1.0;
  double c3 = 2.0;
  double k1 = 1.0;
};

// Two-branch closed-form bound on omega_mu for sub-Weibull coordinates:
// c3 * k1 * R * log(e*d)^(1/eta) / sqrt(mu) when mu <= c1*d, else 0.
double theory_bound_subweibull(double R, double d, double eta, double mu,
                               const SubWeibullBoundConstants& c = {});

// Closed-form rate bound for the Pareto example:
// C9 * R / (tau * q^{3/2}) * d^{1/(eta2-0.5*iota)+iota/8} * n^{-1/2+iota}.
double theory_bound_pareto(double R, double d, double eta2, double iota,
                           double n, double tau, double q, double c9 = 1.0);

}  // namespace ermsim
