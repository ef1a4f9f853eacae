#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ermsim/complexity.hpp"
#include "ermsim/rng.hpp"
#include "oracles.hpp"

using namespace ermsim;

namespace {

DgpSpec iid_gaussian(int d, double R) {
  DgpSpec spec;
  spec.kind = DgpKind::GaussianAR;
  spec.d = d;
  spec.dependence = 0.0;
  spec.theta_star.assign(static_cast<std::size_t>(d), 0.0);
  spec.R = R;
  return spec;
}

// Fitted sub-Weibull norm constant K1 = sup_p ||w||_p / p^{1/eta} for the
// unit-sd symmetrized Weibull: ||w||_p = lambda * Gamma(1+p/eta)^{1/p}.
double fitted_k1(double eta) {
  const double lambda = sym_weibull_scale(eta, 1.0);
  double best = 0.0;
  for (double p = 1.0; p <= 60.0; p += 0.25) {
    const double norm = lambda * std::exp(std::lgamma(1.0 + p / eta) / p);
    best = std::max(best, norm / std::pow(p, 1.0 / eta));
  }
  return best;
}

}  // namespace

TEST_CASE("sup pinned cases") {
  CHECK(sup_linear_l1_l2(std::vector<double>{3.0, 1.0}, 1.0, 10.0) ==
        doctest::Approx(3.0).epsilon(1e-10));
  CHECK(sup_linear_l1_l2(std::vector<double>{3.0, 1.0}, 100.0, 1.0) ==
        doctest::Approx(std::sqrt(10.0)).epsilon(1e-10));
  // Symmetric solution t=(0.6,0.6) is l2-feasible.
  CHECK(sup_linear_l1_l2(std::vector<double>{1.0, 1.0}, 1.2, 1.0) ==
        doctest::Approx(1.2).epsilon(1e-10));
  CHECK(sup_linear_l1_l2(std::vector<double>{0.0, 0.0}, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(sup_linear_l1_l2(std::vector<double>{1.0}, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("sup equals the single-constraint value when the other is slack") {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform01() * 6);
    std::vector<double> w(static_cast<std::size_t>(d));
    for (double& x : w) x = rng.normal();
    double linf = 0.0, l2 = 0.0, l1 = 0.0;
    for (double x : w) {
      linf = std::max(linf, std::abs(x));
      l2 += x * x;
      l1 += std::abs(x);
    }
    l2 = std::sqrt(l2);
    if (linf == 0.0) continue;
    const double rho = 0.1 + 2.0 * rng.uniform01();
    // l2 slack: the whole l1 ball fits inside the l2 ball.
    CHECK(sup_linear_l1_l2(w, rho, rho * 1.0001 + 1.0) ==
          doctest::Approx(rho * linf).epsilon(1e-9));
    // l1 slack: the l2 optimum r*w/||w|| has l1 norm r*l1/l2 <= rho.
    const double r = rho * l2 / l1 * 0.999;
    CHECK(sup_linear_l1_l2(w, rho, r) == doctest::Approx(r * l2).epsilon(1e-9));
  }
}

TEST_CASE("sup agrees with dense 2-D boundary search") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w = {2.0 * rng.normal(), 2.0 * rng.normal()};
    const double rho = 0.2 + 2.0 * rng.uniform01();
    const double r = 0.2 + 2.0 * rng.uniform01();
    const double dual = sup_linear_l1_l2(w, rho, r);
    const double grid = oracles::sup2d_grid(w[0], w[1], rho, r, 200000);
    CHECK(std::abs(dual - grid) < 1e-3);
    const double exact = oracles::sup2d_exact(w[0], w[1], rho, r);
    CHECK(dual == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("ellipsoid variant reduces to a change of variables") {
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w = {rng.normal(), rng.normal(), rng.normal()};
    std::vector<double> s = {0.5 + rng.uniform01(), 0.5 + rng.uniform01(),
                             0.5 + rng.uniform01()};
    const double rho = 0.3 + rng.uniform01();
    const double r = 0.3 + rng.uniform01();
    // Equal scales: sup over the ellipsoid equals the plain sup at r/s.
    std::vector<double> eq = {s[0], s[0], s[0]};
    CHECK(sup_linear_l1_ellipsoid(w, rho, r, eq) ==
          doctest::Approx(sup_linear_l1_l2(w, rho, r / s[0])).epsilon(1e-9));
    // General scales: dominated by each single-constraint relaxation.
    const double v = sup_linear_l1_ellipsoid(w, rho, r, s);
    double linf = 0.0;
    for (double x : w) linf = std::max(linf, std::abs(x));
    CHECK(v <= rho * linf + 1e-9);
  }
}

TEST_CASE("degenerate class has zero complexity") {
  DgpSpec spec = iid_gaussian(2, 0.0);
  const auto est = omega_mu_estimate(spec, 8, 0.5, 100, 7);
  CHECK(est.value == 0.0);
  const auto width = gaussian_width_estimate(spec, 1.0, 100, 7);
  CHECK(width.value == 0.0);
}

TEST_CASE("omega_mu matches the brute-force localization oracle") {
  DgpSpec spec = iid_gaussian(2, 1.0);
  const int mu = 64;
  const double gamma = 0.145;
  const long n_mc = 100000;

  const auto est = omega_mu_estimate(spec, mu, gamma, n_mc, 2025);

  // Independent oracle: fresh draws, exact 2-D sup, dense r scan.
  Rng rng(909090);
  std::vector<std::pair<double, double>> ws(static_cast<std::size_t>(n_mc));
  for (auto& w : ws) {
    double w0 = 0.0, w1 = 0.0;
    for (int i = 0; i < mu; ++i) {
      const double eps = rng.sign();
      w0 += eps * rng.normal();
      w1 += eps * rng.normal();
    }
    w = {w0 / mu, w1 / mu};
  }
  const auto phi = [&](double r) {
    double total = 0.0;
    for (const auto& [w0, w1] : ws)
      total += oracles::sup2d_exact(w0, w1, 2.0 * spec.R, r);
    return total / static_cast<double>(n_mc);
  };
  auto scan = [&](double lo, double hi, int points) {
    for (int i = 0; i <= points; ++i) {
      const double r = lo + (hi - lo) * i / points;
      if (r > 0.0 && phi(r) <= gamma * r) return r;
    }
    return hi;
  };
  const double coarse = scan(0.0, 6.0, 48);
  const double fine = scan(coarse - 6.0 / 48, coarse, 48);

  CHECK(std::abs(est.value - fine) / fine < 0.02);
}

TEST_CASE("doubling gamma never increases omega_mu") {
  DgpSpec spec = iid_gaussian(3, 1.0);
  for (double gamma : {0.05, 0.1, 0.2, 0.4}) {
    const auto lo = omega_mu_estimate(spec, 16, gamma, 2000, 4);
    const auto hi = omega_mu_estimate(spec, 16, 2.0 * gamma, 2000, 4);
    CHECK(hi.value <= lo.value + 1e-12);
  }
}

TEST_CASE("localization curve r -> E[sup]/r is non-increasing") {
  DgpSpec spec = iid_gaussian(2, 1.0);
  double previous = 1e300;
  for (double r : {0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
    const auto bloc = rademacher_width_estimate(spec, 16, r, 4000, 12);
    const double ratio = bloc.value / r;
    CHECK(ratio <= previous + 1e-12);
    previous = ratio;
    // Same invariant for the Gaussian width path.
  }
  previous = 1e300;
  for (double r : {0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
    const auto width = gaussian_width_estimate(spec, r, 4000, 12);
    CHECK(width.value / r <= previous + 1e-12);
    previous = width.value / r;
  }
}

TEST_CASE("small-ball estimate hits the gaussian oracle") {
  DgpSpec spec = iid_gaussian(3, 1.0);
  const long n_mc = 100000;
  const auto est = small_ball_estimate(spec, 1.0, 4, n_mc, 31);
  const double oracle = 0.31731050786291410;  // 2(1 - Phi(1))
  CHECK(std::abs(est.value - oracle) < 3.0 * est.std_error + 0.004);
  // Tiny threshold: the event is almost sure.
  const auto full = small_ball_estimate(spec, 1e-9, 4, 10000, 31);
  CHECK(full.value == doctest::Approx(1.0).epsilon(1e-3));
  // Monotone non-increasing across a u grid (same seed).
  double prev = 2.0;
  for (double u : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto e = small_ball_estimate(spec, u, 4, 20000, 31);
    CHECK(e.value <= prev + 1e-12);
    prev = e.value;
  }
}

TEST_CASE("gaussian width pinned value in one dimension") {
  DgpSpec spec = iid_gaussian(1, 1.0);
  const auto est = gaussian_width_estimate(spec, 10.0, 100000, 77);
  const double oracle = 0.79788456080286536;  // E|g| = sqrt(2/pi)
  CHECK(std::abs(est.value - oracle) < 3.0 * est.std_error);
  // Non-decreasing in r and flat once r exceeds the class diameter.
  double prev = 0.0;
  for (double r : {0.2, 0.5, 1.0, 2.0}) {
    const auto e = gaussian_width_estimate(spec, r, 20000, 77);
    CHECK(e.value >= prev - 1e-12);
    prev = e.value;
  }
  const auto a = gaussian_width_estimate(spec, 1.5, 20000, 77);
  const auto b = gaussian_width_estimate(spec, 50.0, 20000, 77);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("omega_1 and omega_q behave like localization radii") {
  DgpSpec spec = iid_gaussian(2, 1.0);
  const auto w1 = omega_1_estimate(spec, 4096, 1.0, 0.02, 20000, 5);
  CHECK(w1.value >= 0.0);
  const auto wq = omega_q_estimate(spec, 4096, 1.0, 0.02, 0.1, 20000, 5);
  CHECK(wq.value >= w1.value - 1e-9);  // max of the two measures
}

TEST_CASE("closed-form bound values") {
  CHECK(theory_bound_subweibull(1.0, std::exp(1.0), 1.0, 1.0) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(theory_bound_subweibull(1.0, 10.0, 1.0, 11.0) == 0.0);
  // Quadrupling mu halves the nonzero branch.
  const double one = theory_bound_subweibull(1.0, 100.0, 0.8, 4.0);
  const double four = theory_bound_subweibull(1.0, 100.0, 0.8, 16.0);
  CHECK(four == doctest::Approx(one / 2.0).epsilon(1e-12));

  CHECK(theory_bound_pareto(1.0, 16.0, 4.0, 0.0, 1e4, 1.0, 1.0) ==
        doctest::Approx(0.02).epsilon(1e-12));
  CHECK(theory_bound_pareto(1.0, 1.0, 4.0, 0.0, 1e4, 1.0, 1.0) ==
        doctest::Approx(0.01).epsilon(1e-12));
  const double n1 = theory_bound_pareto(2.0, 8.0, 3.0, 0.0, 1000.0, 0.5, 0.3);
  const double n4 = theory_bound_pareto(2.0, 8.0, 3.0, 0.0, 4000.0, 0.5, 0.3);
  CHECK(n4 == doctest::Approx(n1 / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(theory_bound_pareto(1.0, 2.0, 1.5, 0.0, 100.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("sub-weibull order statistics stay below the closed-form envelope") {
  const double eta = 1.0;
  const double k1 = fitted_k1(eta);
  Rng rng(2026);
  for (int d : {4, 16, 64}) {
    const int reps = 30000;
    std::vector<double> prefix_mean(static_cast<std::size_t>(d), 0.0);
    std::vector<double> batch(static_cast<std::size_t>(d));
    for (int rep = 0; rep < reps; ++rep) {
      for (double& x : batch) x = std::abs(sample_sym_weibull(eta, 1.0, rng));
      std::sort(batch.begin(), batch.end(), std::greater<>());
      double cum = 0.0;
      for (int k = 0; k < d; ++k) {
        cum += batch[static_cast<std::size_t>(k)] * batch[static_cast<std::size_t>(k)];
        prefix_mean[static_cast<std::size_t>(k)] += std::sqrt(cum);
      }
    }
    for (double& v : prefix_mean) v /= reps;
    for (int k = 1; k <= d; k *= 2) {
      const double envelope =
          std::sqrt(2.0 * k) * k1 *
          std::pow(std::log(std::exp(1.0) * d), 1.0 / eta);
      CHECK(prefix_mean[static_cast<std::size_t>(k - 1)] <= envelope);
    }
  }
}

TEST_CASE("pareto block means stay below the fitted two-term tail envelope") {
  const double eta3 = 3.0;
  const double iota = 0.5;
  const double p = eta3 - 0.5 * iota;  // 2.75
  const double dscale = 2.0;
  const int reps = 50000;

  std::vector<double> tgrid;
  for (double t = 1.0; t <= 32.0; t *= 1.45) tgrid.push_back(t);

  const auto envelope = [&](double mu, double t) {
    return std::pow(dscale, eta3 - 2.0 * p - 1.0) *
               std::pow(mu, 1.0 - eta3 / 2.0) * std::pow(t, eta3 - 2.0 * p) +
           std::pow(dscale, -2.0) * std::pow(t, -p);
  };
  const auto empirical_tail = [&](int mu, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> tail(tgrid.size(), 0.0);
    for (int rep = 0; rep < reps; ++rep) {
      double sum = 0.0;
      for (int i = 0; i < mu; ++i)
        sum += rng.sign() * sample_pareto_plus(rng.uniform01(), eta3, dscale);
      const double w = std::abs(sum) / std::sqrt(static_cast<double>(mu));
      for (std::size_t k = 0; k < tgrid.size(); ++k)
        if (w >= tgrid[k]) tail[k] += 1.0;
    }
    for (double& v : tail) v /= reps;
    return tail;
  };

  // Fit C3 on the smallest block count, then verify the mu-scaling.
  const auto calib = empirical_tail(16, 91);
  double c3 = 0.0;
  for (std::size_t k = 0; k < tgrid.size(); ++k)
    c3 = std::max(c3, calib[k] / envelope(16.0, tgrid[k]));
  REQUIRE(c3 > 0.0);
  for (int mu : {64, 256}) {
    const auto tail = empirical_tail(mu, 91 + mu);
    for (std::size_t k = 0; k < tgrid.size(); ++k) {
      const double se = std::sqrt(std::max(tail[k] * (1.0 - tail[k]), 0.0) /
                                  static_cast<double>(reps));
      CHECK(tail[k] <= c3 * envelope(mu, tgrid[k]) + 3.0 * se);
    }
  }
}
