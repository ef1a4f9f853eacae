#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ermsim/dgp.hpp"

namespace ermsim {

enum class CovSource { Analytic, MonteCarlo };

// Diagonal of the stationary input covariance (all supported processes have
// independent coordinates).
struct StationaryCov {
  std::vector<double> diag;
  CovSource source = CovSource::Analytic;
  long mc_n = 0;
};

// Analytic per-coordinate stationary variance when mc_n == 0:
//   GaussianAR    1/(1 - dependence^2)
//   SubWeibullAR  1/(1 - dependence^2)   (unit-variance innovations)
//   SemiParetoAR  second_moment_sym_pareto(eta3, d_i)
// With mc_n > 0, a Monte-Carlo estimate over mc_n iid stationary draws is
// returned instead, for cross-validation against the analytic route.
StationaryCov stationary_cov(const DgpSpec& spec, long mc_n = 0,
                             std::uint64_t seed = 0);

// L2(pi) error sqrt(sum_j diag_j (theta_hat_j - theta_star_j)^2).
double l2_error(std::span<const double> theta_hat,
                std::span<const double> theta_star, const StationaryCov& cov);

}  // namespace ermsim
