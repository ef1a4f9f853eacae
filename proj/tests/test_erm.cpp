#include <doctest.h>

#include <cmath>
#include <vector>

#include "ermsim/erm.hpp"
#include "ermsim/rng.hpp"
#include "oracles.hpp"

using namespace ermsim;

namespace {

Sample make_sample(std::vector<double> x, std::vector<double> y, int d) {
  Sample s;
  s.spec.d = d;
  s.spec.theta_star.assign(static_cast<std::size_t>(d), 0.0);
  s.x = std::move(x);
  s.y = std::move(y);
  s.n = static_cast<long>(s.y.size());
  return s;
}

}  // namespace

TEST_CASE("loss values at the pinned points") {
  LossSpec huber{LossKind::Huber, 1.0};
  CHECK(loss_value(huber, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(loss_value(huber, 3.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(loss_value(huber, -3.0) == doctest::Approx(2.5).epsilon(1e-15));
  LossSpec squared{LossKind::Squared, 0.0};
  CHECK(loss_value(squared, -2.0) == doctest::Approx(4.0).epsilon(1e-15));
  // Continuity at the threshold.
  CHECK(loss_value(huber, 1.0 - 1e-12) ==
        doctest::Approx(loss_value(huber, 1.0 + 1e-12)).epsilon(1e-9));
}

TEST_CASE("loss gradients and the clipped branch") {
  LossSpec huber{LossKind::Huber, 1.0};
  CHECK(loss_grad(huber, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(loss_grad(huber, -3.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(loss_grad(huber, 1e9)) <= 1.0);
  LossSpec squared{LossKind::Squared, 0.0};
  CHECK(loss_grad(squared, -2.0) == doctest::Approx(-4.0).epsilon(1e-15));
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(2024);
  const double h = 1e-6;
  for (int trial = 0; trial < 1000; ++trial) {
    LossSpec loss;
    if (rng.uniform01() < 0.5) {
      loss.kind = LossKind::Squared;
    } else {
      loss.kind = LossKind::Huber;
      loss.huber_threshold = 0.5 + 2.0 * rng.uniform01();
    }
    const double t = 10.0 * (rng.uniform01() - 0.5);
    const double fd = (loss_value(loss, t + h) - loss_value(loss, t - h)) / (2.0 * h);
    const double an = loss_grad(loss, t);
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("l1 projection pinned cases") {
  CHECK(project_l1({3.0, 0.0}, 1.0) == std::vector<double>{1.0, 0.0});
  CHECK(project_l1({0.3, -0.2}, 1.0) == std::vector<double>{0.3, -0.2});
  const auto p = project_l1({2.0, 1.0}, 1.0);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
  // Boundary point is returned unchanged.
  CHECK(project_l1({0.4, -0.6}, 1.0) == std::vector<double>{0.4, -0.6});
  CHECK_THROWS_AS(project_l1({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("l1 projection agrees with dense 2-D search") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const double R = 0.5 + 2.0 * rng.uniform01();
    const std::vector<double> v = {4.0 * (rng.uniform01() - 0.5),
                                   4.0 * (rng.uniform01() - 0.5)};
    const auto p = project_l1(v, R);
    REQUIRE(std::abs(p[0]) + std::abs(p[1]) <= R + 1e-9);
    const double dist = std::hypot(p[0] - v[0], p[1] - v[1]);
    const double best = oracles::grid_search_objective_2d(
        [&](double a, double b) { return std::hypot(a - v[0], b - v[1]); }, R,
        400);
    CHECK(dist <= best + 1e-2);  // grid resolution slack
  }
}

TEST_CASE("projection properties on random vectors") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform01() * 8);
    std::vector<double> v(static_cast<std::size_t>(d));
    for (double& x : v) x = 6.0 * (rng.uniform01() - 0.5);
    const double R = 0.1 + 3.0 * rng.uniform01();
    const auto p = project_l1(v, R);
    double l1 = 0.0;
    for (double x : p) l1 += std::abs(x);
    CHECK(l1 <= R + 1e-9);
    // Projection is idempotent.
    CHECK(project_l1(p, R) == p);
  }
}

TEST_CASE("exact interpolation in one dimension") {
  const Sample s = make_sample({1.0, 2.0}, {1.0, 2.0}, 1);
  const FitResult fit = erm_fit(s, LossSpec{LossKind::Squared, 0.0}, 10.0);
  CHECK(fit.converged);
  CHECK(fit.theta_hat[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fit matches dense grid search on small instances") {
  Rng rng(7);
  for (int instance = 0; instance < 8; ++instance) {
    const long n = 5 + static_cast<long>(rng.uniform01() * 15);
    std::vector<double> x, y;
    for (long i = 0; i < n; ++i) {
      const double a = rng.normal(), b = rng.normal();
      x.push_back(a);
      x.push_back(b);
      y.push_back(0.7 * a - 0.4 * b + 0.3 * rng.normal());
    }
    Sample s = make_sample(x, y, 2);
    const double R = 0.8;
    const LossSpec loss{LossKind::Squared, 0.0};
    const FitResult fit = erm_fit(s, loss, R);
    const double grid_best = oracles::grid_search_objective_2d(
        [&](double t0, double t1) {
          return empirical_risk(s, loss, std::vector<double>{t0, t1});
        },
        R, 200);
    CHECK(fit.objective <= grid_best + 1e-6);
  }
}

TEST_CASE("huber and squared fits coincide when residuals stay quadratic") {
  Rng rng(13);
  std::vector<double> x, y;
  for (long i = 0; i < 50; ++i) {
    const double a = rng.normal(), b = rng.normal();
    x.push_back(a);
    x.push_back(b);
    y.push_back(0.3 * a - 0.2 * b);  // noise-free
  }
  const Sample s = make_sample(x, y, 2);
  const FitResult sq = erm_fit(s, LossSpec{LossKind::Squared, 0.0}, 1.0);
  const FitResult hu = erm_fit(s, LossSpec{LossKind::Huber, 100.0}, 1.0);
  CHECK(std::abs(sq.theta_hat[0] - hu.theta_hat[0]) < 1e-6);
  CHECK(std::abs(sq.theta_hat[1] - hu.theta_hat[1]) < 1e-6);
}

TEST_CASE("fit result is feasible and the objective trace descends") {
  Rng rng(17);
  std::vector<double> x, y;
  for (long i = 0; i < 200; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    x.push_back(a);
    x.push_back(b);
    x.push_back(c);
    y.push_back(2.0 * a - 1.5 * b + 0.5 * c + rng.normal());
  }
  Sample s = make_sample(x, y, 3);
  FitOptions opts;
  opts.record_trace = true;
  const FitResult fit = erm_fit(s, LossSpec{LossKind::Squared, 0.0}, 1.5, opts);
  double l1 = 0.0;
  for (double t : fit.theta_hat) l1 += std::abs(t);
  CHECK(l1 <= 1.5 + 1e-9);
  REQUIRE(fit.objective_trace.size() > 1);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1]);
}

TEST_CASE("empirical risk is convex along segments") {
  Rng rng(19);
  std::vector<double> x, y;
  for (long i = 0; i < 60; ++i) {
    const double a = rng.normal(), b = rng.normal();
    x.push_back(a);
    x.push_back(b);
    y.push_back(a - b + 0.2 * rng.normal());
  }
  const Sample s = make_sample(x, y, 2);
  for (const LossSpec& loss :
       {LossSpec{LossKind::Squared, 0.0}, LossSpec{LossKind::Huber, 1.0}}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> ta = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
      std::vector<double> tb = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
      const double lambda = rng.uniform01();
      std::vector<double> mix = {lambda * ta[0] + (1 - lambda) * tb[0],
                                 lambda * ta[1] + (1 - lambda) * tb[1]};
      const double lhs = empirical_risk(s, loss, mix);
      const double rhs = lambda * empirical_risk(s, loss, ta) +
                         (1 - lambda) * empirical_risk(s, loss, tb);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("non-convergence is signalled but diagnostics are returned") {
  Rng rng(23);
  std::vector<double> x, y;
  for (long i = 0; i < 100; ++i) {
    const double a = rng.normal();
    x.push_back(a);
    y.push_back(3.0 * a + rng.normal());
  }
  const Sample s = make_sample(x, y, 1);
  FitOptions opts;
  opts.max_iter = 1;
  const FitResult fit = erm_fit(s, LossSpec{LossKind::Squared, 0.0}, 5.0, opts);
  CHECK_FALSE(fit.converged);
  CHECK(fit.final_gap > opts.tol);
  CHECK(fit.theta_hat.size() == 1);
}

TEST_CASE("erm_fit validates inputs") {
  const Sample s = make_sample({1.0}, {1.0}, 1);
  CHECK_THROWS_AS(erm_fit(s, LossSpec{LossKind::Squared, 0.0}, 0.0),
                  std::invalid_argument);
  Sample empty = make_sample({}, {}, 1);
  CHECK_THROWS_AS(erm_fit(empty, LossSpec{LossKind::Squared, 0.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(erm_fit(s, LossSpec{LossKind::Huber, 0.0}, 1.0),
                  std::invalid_argument);
}
