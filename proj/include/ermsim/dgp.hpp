#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ermsim/rng.hpp"

namespace ermsim {

enum class DgpKind { SubWeibullAR, SemiParetoAR, GaussianAR };
enum class NoiseKind { Gaussian, SubWeibull, PolyTail };

std::string to_string(DgpKind kind);
std::string to_string(NoiseKind kind);
DgpKind dgp_kind_from_string(const std::string& s);
NoiseKind noise_kind_from_string(const std::string& s);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  // Gaussian / SubWeibull: the standard deviation of the draw.
  // PolyTail: multiplier on the unit draw whose survival is exactly
  // 1/(1+t^eta4); scale=1 keeps that survival identity.
  double scale = 1.0;
  double tail = 1.0;  // eta_xi (SubWeibull) or eta4 (PolyTail); unused for Gaussian

  void validate() const;  // throws std::invalid_argument
  double sd() const;      // standard deviation of the noise variable
};

struct DgpSpec {
  DgpKind kind = DgpKind::GaussianAR;
  int d = 1;
  // AR coefficient in [0,1). Ignored by SemiParetoAR, whose dependence is
  // fixed by the minification recursion itself.
  double dependence = 0.0;
  // eta_delta (SubWeibullAR innovations) or eta3 (SemiParetoAR); unused for
  // GaussianAR.
  double tail = 1.0;
  std::vector<double> pareto_scales;  // per-coordinate d_i, SemiParetoAR only
  NoiseSpec noise;
  std::vector<double> theta_star;
  double R = 1.0;  // l1 radius of the parameter class
  int burn_in = 1000;

  void validate() const;  // throws std::invalid_argument
  double pareto_scale(int j) const {
    return pareto_scales.empty() ? 1.0 : pareto_scales[static_cast<std::size_t>(j)];
  }
};

struct Sample {
  std::vector<double> x;  // row-major n*d
  std::vector<double> y;
  DgpSpec spec;
  std::uint64_t seed = 0;
  long n = 0;

  double x_at(long i, int j) const {
    return x[static_cast<std::size_t>(i) * spec.d + j];
  }
  std::span<const double> row(long i) const {
    return {x.data() + static_cast<std::size_t>(i) * spec.d,
            static_cast<std::size_t>(spec.d)};
  }
};

// Inverse-survival draw of the positive Pareto law L+(eta3, scale) with
// P(delta > t) = 1/(1+(scale*t)^eta3). u must lie in (0,1).
double sample_pareto_plus(double u, double eta3, double scale);

// Weibull scale that gives the symmetrized-Weibull variable standard
// deviation target_sd: lambda = target_sd / sqrt(Gamma(1+2/eta)).
double sym_weibull_scale(double eta, double target_sd);

// Symmetric random variable with |W| ~ Weibull(shape eta), rescaled so that
// sd(W) = target_sd. Mean is exactly 0 by sign symmetry and
// P(|W| > t) = exp(-(t/lambda)^eta) for the scale above.
double sample_sym_weibull(double eta, double target_sd, Rng& rng);

// One draw of the regression noise.
double sample_noise(const NoiseSpec& noise, Rng& rng);

// E[X^2] of the symmetric Pareto marginal L(eta3, scale):
// (2/scale^2) * (pi/eta3) / sin(2*pi/eta3). Requires eta3 > 2.
double second_moment_sym_pareto(double eta3, double scale);

// One iid draw from the stationary input law pi. Exact for GaussianAR and
// SemiParetoAR; SubWeibullAR uses the truncated moving-average expansion
// (geometric contraction makes the truncation error below double rounding).
void stationary_draw(const DgpSpec& spec, Rng& rng, std::span<double> out);

// Length-n sample of (X_i, Y_i) with Y_i = theta_star . X_i + xi_i.
// SubWeibullAR starts at zero and discards burn_in steps; SemiParetoAR and
// GaussianAR are initialized exactly at the stationary law. Pure function of
// (spec, n, seed).
Sample generate(const DgpSpec& spec, long n, std::uint64_t seed);

}  // namespace ermsim
