#include <doctest.h>

#include <cmath>
#include <vector>

#include "ermsim/dgp.hpp"
#include "oracles.hpp"

using namespace ermsim;

namespace {

DgpSpec gaussian_spec(int d, double dependence) {
  DgpSpec spec;
  spec.kind = DgpKind::GaussianAR;
  spec.d = d;
  spec.dependence = dependence;
  spec.theta_star.assign(static_cast<std::size_t>(d), 0.0);
  spec.R = 1.0;
  return spec;
}

DgpSpec semi_pareto_spec(int d, double eta3) {
  DgpSpec spec;
  spec.kind = DgpKind::SemiParetoAR;
  spec.d = d;
  spec.tail = eta3;
  spec.theta_star.assign(static_cast<std::size_t>(d), 0.0);
  spec.R = 1.0;
  return spec;
}

}  // namespace

TEST_CASE("pareto inverse survival hits the pinned points") {
  CHECK(sample_pareto_plus(0.5, 3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // ((1/0.2 - 1)^(1/3))/2, checked against high-precision arithmetic.
  CHECK(sample_pareto_plus(0.2, 3.0, 2.0) ==
        doctest::Approx(0.79370052598409974).epsilon(1e-12));
  CHECK(sample_pareto_plus(1.0 - 1e-12, 3.0, 1.0) < 1e-3);
  CHECK_THROWS_AS(sample_pareto_plus(0.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_pareto_plus(1.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_pareto_plus(0.5, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("pareto draws match the analytic CDF (KS at 1%)") {
  const std::size_t n = 10000;
  for (double eta3 : {2.5, 3.0, 4.0})
    for (double scale : {0.5, 1.0, 2.0}) {
      Rng rng(derive_seed(101, static_cast<std::uint64_t>(eta3 * 10),
                          static_cast<std::uint64_t>(scale * 10)));
      std::vector<double> draws(n);
      for (double& x : draws) x = sample_pareto_plus(rng.uniform01(), eta3, scale);
      const double stat = oracles::ks_statistic(draws, [&](double t) {
        return t <= 0.0 ? 0.0 : 1.0 - 1.0 / (1.0 + std::pow(scale * t, eta3));
      });
      CHECK(stat < oracles::ks_critical_one_sample_1pct(n));
    }
}

TEST_CASE("symmetrized weibull moments") {
  Rng rng(55);
  const long n = 1000000;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& x : xs) x = sample_sym_weibull(1.0, 1.0, rng);
  CHECK(oracles::mean(xs) > -0.01);
  CHECK(oracles::mean(xs) < 0.01);
  const double var = oracles::variance(xs);
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_CASE("symmetrized weibull tail sits at the analytic survival") {
  // For eta=2 and unit sd the Weibull scale is exactly 1, so
  // P(|W| > 3) = exp(-9).
  const double lambda = sym_weibull_scale(2.0, 1.0);
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-12));
  const double analytic = std::exp(-std::pow(3.0 / lambda, 2.0));
  Rng rng(77);
  const long n = 1000000;
  long hits = 0;
  for (long i = 0; i < n; ++i)
    if (std::abs(sample_sym_weibull(2.0, 1.0, rng)) > 3.0) ++hits;
  const double emp = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(n));
  CHECK(std::abs(emp - analytic) < 3.0 * se);
  CHECK(emp < analytic + 3.0 * se);
}

TEST_CASE("iid gaussian columns have unit variance") {
  DgpSpec spec = gaussian_spec(2, 0.0);
  const Sample sample = generate(spec, 1000000, 5);
  for (int j = 0; j < 2; ++j) {
    std::vector<double> col(static_cast<std::size_t>(sample.n));
    for (long i = 0; i < sample.n; ++i) col[static_cast<std::size_t>(i)] = sample.x_at(i, j);
    CHECK(oracles::variance(col) == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("semi-pareto marginal survival at t=1 is 1/4") {
  DgpSpec spec = semi_pareto_spec(1, 3.0);
  const Sample sample = generate(spec, 1000000, 9);
  long hits = 0;
  for (long i = 0; i < sample.n; ++i)
    if (sample.x_at(i, 0) > 1.0) ++hits;
  const double survival = static_cast<double>(hits) / static_cast<double>(sample.n);
  CHECK(survival > 0.245);
  CHECK(survival < 0.255);
}

TEST_CASE("generate is a pure function of (spec, n, seed)") {
  DgpSpec spec = semi_pareto_spec(3, 3.0);
  spec.noise.kind = NoiseKind::PolyTail;
  spec.noise.tail = 3.0;
  const Sample a = generate(spec, 100, 42);
  const Sample b = generate(spec, 100, 42);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  const Sample c = generate(spec, 100, 43);
  CHECK(a.x != c.x);
}

TEST_CASE("generate rejects invalid inputs") {
  DgpSpec spec = gaussian_spec(2, 0.5);
  CHECK_THROWS_AS(generate(spec, 0, 1), std::invalid_argument);
  spec.dependence = 1.0;
  CHECK_THROWS_AS(generate(spec, 10, 1), std::invalid_argument);
  spec.dependence = 0.5;
  spec.theta_star = {2.0, 2.0};  // l1 norm above R
  CHECK_THROWS_AS(generate(spec, 10, 1), std::invalid_argument);
}

TEST_CASE("semi-pareto chain is strictly stationary (two-sample KS)") {
  DgpSpec spec = semi_pareto_spec(1, 3.0);
  const std::size_t trajectories = 20000;
  std::vector<double> at0, at300;
  at0.reserve(trajectories);
  at300.reserve(trajectories);
  for (std::size_t k = 0; k < trajectories; ++k) {
    const Sample s = generate(spec, 301, derive_seed(1000, k));
    at0.push_back(s.x_at(0, 0));
    at300.push_back(s.x_at(300, 0));
  }
  const double stat = oracles::ks_statistic_two_sample(at0, at300);
  CHECK(stat < oracles::ks_critical_two_sample_1pct(trajectories, trajectories));
}

TEST_CASE("generated coordinates are symmetric (skewness near zero)") {
  DgpSpec pareto = semi_pareto_spec(1, 4.0);
  const Sample sp = generate(pareto, 400000, 21);
  std::vector<double> xs(sp.x.begin(), sp.x.end());
  CHECK(std::abs(oracles::skewness(xs)) < 0.05);

  DgpSpec weib = gaussian_spec(1, 0.3);
  weib.kind = DgpKind::SubWeibullAR;
  weib.tail = 1.0;
  const Sample sw = generate(weib, 400000, 22);
  std::vector<double> ws(sw.x.begin(), sw.x.end());
  CHECK(std::abs(oracles::skewness(ws)) < 0.05);
}

TEST_CASE("second moment closed form matches quadrature") {
  CHECK(second_moment_sym_pareto(3.0, 1.0) ==
        doctest::Approx(2.4183991523122905).epsilon(1e-12));
  for (double eta3 : {2.5, 3.0, 4.0})
    for (double s : {0.5, 1.0, 2.0}) {
      const double closed = second_moment_sym_pareto(eta3, s);
      const double quad = oracles::sym_pareto_second_moment_quadrature(eta3, s);
      CHECK(std::abs(closed - quad) < 1e-10 * std::max(1.0, closed));
    }
  // Scale acts as s^{-2}.
  CHECK(second_moment_sym_pareto(3.0, 2.0) ==
        doctest::Approx(second_moment_sym_pareto(3.0, 1.0) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(second_moment_sym_pareto(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("polytail noise keeps the exact survival") {
  NoiseSpec noise;
  noise.kind = NoiseKind::PolyTail;
  noise.tail = 3.0;
  Rng rng(31);
  long hits = 0;
  const long n = 200000;
  for (long i = 0; i < n; ++i)
    if (std::abs(sample_noise(noise, rng)) >= 1.0) ++hits;
  // P(|v| >= 1) = 1/(1+1) = 0.5.
  CHECK(static_cast<double>(hits) / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(noise.sd() ==
        doctest::Approx(std::sqrt(second_moment_sym_pareto(3.0, 1.0))).epsilon(1e-12));
}

TEST_CASE("subweibull chain stationary variance matches the linear recursion") {
  DgpSpec spec = gaussian_spec(1, 0.5);
  spec.kind = DgpKind::SubWeibullAR;
  spec.tail = 1.0;
  const Sample s = generate(spec, 500000, 17);
  std::vector<double> xs(s.x.begin(), s.x.end());
  // Unit-variance innovations: var = 1/(1-0.25).
  CHECK(oracles::variance(xs) == doctest::Approx(4.0 / 3.0).epsilon(0.03));
}

TEST_CASE("noise spec validation") {
  NoiseSpec noise;
  noise.kind = NoiseKind::PolyTail;
  noise.tail = 2.0;
  CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
  noise.tail = 2.5;
  CHECK_NOTHROW(noise.validate());
  noise.scale = 0.0;
  CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
}
