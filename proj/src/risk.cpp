#include "ermsim/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace ermsim {

StationaryCov stationary_cov(const DgpSpec& spec, long mc_n, std::uint64_t seed) {
  if (mc_n < 0) throw std::invalid_argument("stationary_cov: mc_n must be >= 0");
  StationaryCov cov;
  const int d = spec.d;

  if (mc_n > 0) {
    cov.source = CovSource::MonteCarlo;
    cov.mc_n = mc_n;
    cov.diag.assign(static_cast<std::size_t>(d), 0.0);
    Rng rng(derive_seed(seed, 0x636f7661ULL));
    std::vector<double> draw(static_cast<std::size_t>(d));
    for (long i = 0; i < mc_n; ++i) {
      stationary_draw(spec, rng, draw);
      for (int j = 0; j < d; ++j)
        cov.diag[static_cast<std::size_t>(j)] += draw[static_cast<std::size_t>(j)] *
                                                 draw[static_cast<std::size_t>(j)];
    }
    for (double& v : cov.diag) v /= static_cast<double>(mc_n);
    return cov;
  }

  cov.source = CovSource::Analytic;
  cov.diag.resize(static_cast<std::size_t>(d));
  switch (spec.kind) {
    case DgpKind::GaussianAR:
    case DgpKind::SubWeibullAR: {
      const double v = 1.0 / (1.0 - spec.dependence * spec.dependence);
      for (double& e : cov.diag) e = v;
      break;
    }
    case DgpKind::SemiParetoAR: {
      for (int j = 0; j < d; ++j)
        cov.diag[static_cast<std::size_t>(j)] =
            second_moment_sym_pareto(spec.tail, spec.pareto_scale(j));
      break;
    }
  }
  return cov;
}

double l2_error(std::span<const double> theta_hat,
                std::span<const double> theta_star, const StationaryCov& cov) {
  if (theta_hat.size() != theta_star.size() ||
      theta_hat.size() != cov.diag.size())
    throw std::invalid_argument("l2_error: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < theta_hat.size(); ++j) {
    const double diff = theta_hat[j] - theta_star[j];
    s += cov.diag[j] * diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace ermsim
