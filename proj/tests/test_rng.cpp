#include <doctest.h>

#include <set>
#include <vector>

#include "ermsim/rng.hpp"
#include "oracles.hpp"

using namespace ermsim;

TEST_CASE("same seed reproduces the stream") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next() == b.next()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("derive_seed separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t n : {64ULL, 128ULL, 256ULL})
    for (std::uint64_t rep = 0; rep < 100; ++rep)
      seen.insert(derive_seed(42, n, rep));
  CHECK(seen.size() == 300);
  CHECK(derive_seed(42, 64, 0) != derive_seed(43, 64, 0));
}

TEST_CASE("uniform01 stays inside the open interval") {
  Rng rng(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal transform has unit moments") {
  Rng rng(11);
  std::vector<double> xs(200000);
  for (double& x : xs) x = rng.normal();
  CHECK(oracles::mean(xs) == doctest::Approx(0.0).epsilon(0.01));
  CHECK(oracles::variance(xs) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sign is symmetric") {
  Rng rng(3);
  long pos = 0;
  const long n = 100000;
  for (long i = 0; i < n; ++i)
    if (rng.sign() > 0) ++pos;
  CHECK(std::abs(static_cast<double>(pos) / n - 0.5) < 0.01);
}
