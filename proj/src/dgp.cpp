#include "ermsim/dgp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ermsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;

// Effective number of AR steps until dependence^j drops below double
// rounding; used for stationary_draw of the SubWeibullAR chain.
int contraction_steps(double dependence) {
  if (dependence <= 0.0) return 0;
  return static_cast<int>(std::ceil(-53.0 * std::log(2.0) / std::log(dependence))) + 1;
}
}  // namespace

std::string to_string(DgpKind kind) {
  switch (kind) {
    case DgpKind::SubWeibullAR: return "SubWeibullAR";
    case DgpKind::SemiParetoAR: return "SemiParetoAR";
    case DgpKind::GaussianAR: return "GaussianAR";
  }
  return "?";
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "Gaussian";
    case NoiseKind::SubWeibull: return "SubWeibull";
    case NoiseKind::PolyTail: return "PolyTail";
  }
  return "?";
}

DgpKind dgp_kind_from_string(const std::string& s) {
  if (s == "SubWeibullAR") return DgpKind::SubWeibullAR;
  if (s == "SemiParetoAR") return DgpKind::SemiParetoAR;
  if (s == "GaussianAR") return DgpKind::GaussianAR;
  throw std::invalid_argument("unknown dgp kind '" + s + "'");
}

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "Gaussian") return NoiseKind::Gaussian;
  if (s == "SubWeibull") return NoiseKind::SubWeibull;
  if (s == "PolyTail") return NoiseKind::PolyTail;
  throw std::invalid_argument("unknown noise kind '" + s + "'");
}

void NoiseSpec::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("noise.scale must be > 0");
  if (kind == NoiseKind::SubWeibull && !(tail > 0.0))
    throw std::invalid_argument("noise.tail must be > 0 for SubWeibull noise");
  if (kind == NoiseKind::PolyTail && !(tail > 2.0))
    throw std::invalid_argument("noise.tail (eta4) must be > 2 for PolyTail noise");
}

double NoiseSpec::sd() const {
  switch (kind) {
    case NoiseKind::Gaussian:
    case NoiseKind::SubWeibull:
      return scale;
    case NoiseKind::PolyTail:
      return scale * std::sqrt(second_moment_sym_pareto(tail, 1.0));
  }
  return scale;
}

void DgpSpec::validate() const {
  if (d < 1) throw std::invalid_argument("dgp.d must be >= 1");
  if (!(dependence >= 0.0 && dependence < 1.0))
    throw std::invalid_argument("dgp.dependence must lie in [0,1)");
  if (kind == DgpKind::SubWeibullAR && !(tail > 0.0))
    throw std::invalid_argument("dgp.tail must be > 0 for SubWeibullAR");
  if (kind == DgpKind::SemiParetoAR) {
    if (!(tail > 2.0))
      throw std::invalid_argument("dgp.tail (eta3) must be > 2 for SemiParetoAR");
    if (!pareto_scales.empty() &&
        pareto_scales.size() != static_cast<std::size_t>(d))
      throw std::invalid_argument("dgp.pareto_scales must have d entries");
    for (double s : pareto_scales)
      if (!(s > 0.0)) throw std::invalid_argument("pareto_scales entries must be > 0");
  }
  if (!(R >= 0.0)) throw std::invalid_argument("dgp.R must be >= 0");
  if (theta_star.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("dgp.theta_star must have d entries");
  double l1 = 0.0;
  for (double v : theta_star) l1 += std::abs(v);
  if (l1 > R * (1.0 + 1e-12))
    throw std::invalid_argument("||theta_star||_1 must not exceed R");
  if (burn_in < 0) throw std::invalid_argument("dgp.burn_in must be >= 0");
  noise.validate();
}

double sample_pareto_plus(double u, double eta3, double scale) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("sample_pareto_plus: u must lie in (0,1)");
  if (!(eta3 > 0.0)) throw std::invalid_argument("sample_pareto_plus: eta3 must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("sample_pareto_plus: scale must be > 0");
  return std::pow(1.0 / u - 1.0, 1.0 / eta3) / scale;
}

double sym_weibull_scale(double eta, double target_sd) {
  if (!(eta > 0.0)) throw std::invalid_argument("sym_weibull_scale: eta must be > 0");
  if (!(target_sd > 0.0))
    throw std::invalid_argument("sym_weibull_scale: target_sd must be > 0");
  return target_sd / std::sqrt(std::tgamma(1.0 + 2.0 / eta));
}

double sample_sym_weibull(double eta, double target_sd, Rng& rng) {
  const double lambda = sym_weibull_scale(eta, target_sd);
  const double u = rng.uniform01();
  return rng.sign() * lambda * std::pow(-std::log(u), 1.0 / eta);
}

double sample_noise(const NoiseSpec& noise, Rng& rng) {
  switch (noise.kind) {
    case NoiseKind::Gaussian:
      return rng.normal(noise.scale);
    case NoiseKind::SubWeibull:
      return sample_sym_weibull(noise.tail, noise.scale, rng);
    case NoiseKind::PolyTail:
      return noise.scale * rng.sign() *
             sample_pareto_plus(rng.uniform01(), noise.tail, 1.0);
  }
  return 0.0;
}

double second_moment_sym_pareto(double eta3, double scale) {
  if (!(eta3 > 2.0))
    throw std::invalid_argument("second_moment_sym_pareto: eta3 must be > 2 (moment diverges)");
  if (!(scale > 0.0))
    throw std::invalid_argument("second_moment_sym_pareto: scale must be > 0");
  return (2.0 / (scale * scale)) * (kPi / eta3) / std::sin(2.0 * kPi / eta3);
}

void stationary_draw(const DgpSpec& spec, Rng& rng, std::span<double> out) {
  const int d = spec.d;
  switch (spec.kind) {
    case DgpKind::GaussianAR: {
      const double sd = 1.0 / std::sqrt(1.0 - spec.dependence * spec.dependence);
      for (int j = 0; j < d; ++j) out[j] = rng.normal(sd);
      return;
    }
    case DgpKind::SemiParetoAR: {
      for (int j = 0; j < d; ++j)
        out[j] = rng.sign() *
                 sample_pareto_plus(rng.uniform01(), spec.tail, spec.pareto_scale(j));
      return;
    }
    case DgpKind::SubWeibullAR: {
      const int steps = contraction_steps(spec.dependence);
      for (int j = 0; j < d; ++j) out[j] = sample_sym_weibull(spec.tail, 1.0, rng);
      for (int s = 0; s < steps; ++s)
        for (int j = 0; j < d; ++j)
          out[j] = spec.dependence * out[j] + sample_sym_weibull(spec.tail, 1.0, rng);
      return;
    }
  }
}

namespace {

// One step of the Pillai minification recursion for a single positive trail.
double semi_pareto_step(double prev, double eta3, double scale, Rng& rng) {
  const double grown = std::pow(2.0, 1.0 / eta3) * prev;
  if (rng.uniform01() <= 0.5) return grown;
  const double delta = sample_pareto_plus(rng.uniform01(), eta3, scale);
  return std::min(grown, delta);
}

}  // namespace

Sample generate(const DgpSpec& spec, long n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");

  const int d = spec.d;
  Sample sample;
  sample.spec = spec;
  sample.seed = seed;
  sample.n = n;
  sample.x.assign(static_cast<std::size_t>(n) * d, 0.0);
  sample.y.assign(static_cast<std::size_t>(n), 0.0);

  Rng rng(derive_seed(seed, 0x64677031ULL));

  switch (spec.kind) {
    case DgpKind::GaussianAR: {
      std::vector<double> state(d);
      const double sd0 = 1.0 / std::sqrt(1.0 - spec.dependence * spec.dependence);
      for (int j = 0; j < d; ++j) state[j] = rng.normal(sd0);
      for (long i = 0; i < n; ++i) {
        if (i > 0)
          for (int j = 0; j < d; ++j)
            state[j] = spec.dependence * state[j] + rng.normal();
        for (int j = 0; j < d; ++j)
          sample.x[static_cast<std::size_t>(i) * d + j] = state[j];
      }
      break;
    }
    case DgpKind::SubWeibullAR: {
      std::vector<double> state(d, 0.0);
      for (int s = 0; s < spec.burn_in; ++s)
        for (int j = 0; j < d; ++j)
          state[j] = spec.dependence * state[j] + sample_sym_weibull(spec.tail, 1.0, rng);
      for (long i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j)
          state[j] = spec.dependence * state[j] + sample_sym_weibull(spec.tail, 1.0, rng);
        for (int j = 0; j < d; ++j)
          sample.x[static_cast<std::size_t>(i) * d + j] = state[j];
      }
      break;
    }
    case DgpKind::SemiParetoAR: {
      // Two independent positive trails plus the U_t symmetrization.
      std::vector<double> trail1(d), trail2(d);
      for (int j = 0; j < d; ++j) {
        trail1[j] = sample_pareto_plus(rng.uniform01(), spec.tail, spec.pareto_scale(j));
        trail2[j] = sample_pareto_plus(rng.uniform01(), spec.tail, spec.pareto_scale(j));
      }
      for (long i = 0; i < n; ++i) {
        if (i > 0) {
          for (int j = 0; j < d; ++j)
            trail1[j] = semi_pareto_step(trail1[j], spec.tail, spec.pareto_scale(j), rng);
          for (int j = 0; j < d; ++j)
            trail2[j] = semi_pareto_step(trail2[j], spec.tail, spec.pareto_scale(j), rng);
        }
        const bool take_first = rng.uniform01() <= 0.5;
        for (int j = 0; j < d; ++j)
          sample.x[static_cast<std::size_t>(i) * d + j] =
              take_first ? trail1[j] : -trail2[j];
      }
      break;
    }
  }

  Rng noise_rng(derive_seed(seed, 0x6e6f697aULL));
  for (long i = 0; i < n; ++i) {
    double fx = 0.0;
    for (int j = 0; j < d; ++j)
      fx += spec.theta_star[static_cast<std::size_t>(j)] *
            sample.x[static_cast<std::size_t>(i) * d + j];
    sample.y[static_cast<std::size_t>(i)] = fx + sample_noise(spec.noise, noise_rng);
  }
  return sample;
}

}  // namespace ermsim
