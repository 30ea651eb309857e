#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "burrce/burr.hpp"
#include "burrce/errors.hpp"
#include "burrce/gof.hpp"
#include "testutil.hpp"

using namespace burrce;

namespace {

const std::vector<BurrParams> param_grid() {
  std::vector<BurrParams> grid;
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    for (double k : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      grid.emplace_back(c, k);
    }
  }
  return grid;
}

}  // namespace

TEST_CASE("BurrParams rejects non-positive or non-finite shapes") {
  CHECK_THROWS_AS(BurrParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(BurrParams(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(BurrParams(-2.0, 1.0), DomainError);
  CHECK_THROWS_AS(BurrParams(1.0, -3.0), DomainError);
  CHECK_THROWS_AS(BurrParams(std::nan(""), 1.0), DomainError);
  CHECK_THROWS_AS(BurrParams(1.0, std::numeric_limits<double>::infinity()),
                  DomainError);
  CHECK_NOTHROW(BurrParams(0.5, 10.0));
}

TEST_CASE("pdf matches hand-computed values") {
  CHECK(pdf(BurrParams(1, 1), 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  // 3 * 2 * 1 * 2^-4 = 6/16
  CHECK(pdf(BurrParams(2, 3), 1.0) == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("pdf at x = 0 depends on c") {
  CHECK(pdf(BurrParams(2, 5), 0.0) == 0.0);
  CHECK(pdf(BurrParams(1, 3), 0.0) == 3.0);
  CHECK_THROWS_AS(pdf(BurrParams(0.5, 1), 0.0), SingularDensityError);
  CHECK_THROWS_AS(pdf(BurrParams(1, 1), -1.0), DomainError);
}

TEST_CASE("pdf at the analytic mode agrees with a fine-grid maximum") {
  const BurrParams p(2, 5);
  // d/dx ln f = 0  =>  x = ((c-1)/(ck+1))^(1/c)
  const double mode = std::pow((p.c - 1.0) / (p.c * p.k + 1.0), 1.0 / p.c);
  double grid_max = 0.0;
  for (double x = 1e-5; x <= 10.0; x += 1e-5) {
    grid_max = std::fmax(grid_max, pdf(p, x));
  }
  CHECK(std::fabs(pdf(p, mode) - grid_max) < 1e-6);
}

TEST_CASE("log_pdf hand values and large-x asymptote") {
  CHECK(log_pdf(BurrParams(1, 1), 1.0) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(log_pdf(BurrParams(2, 3), 1.0) ==
        doctest::Approx(std::log(0.375)).epsilon(1e-14));
  // For x^c >> 1, ln(1+x^c) -> c ln x exactly at double precision.
  const BurrParams p(3, 2);
  const double x = 1e120;
  const double lx = std::log(x);
  const double expected =
      std::log(p.k * p.c) + (p.c - 1.0) * lx - (p.k + 1.0) * p.c * lx;
  CHECK(log_pdf(p, x) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::isfinite(log_pdf(p, x)));
}

TEST_CASE("cdf hand values and bounds") {
  CHECK(cdf(BurrParams(1, 1), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cdf(BurrParams(2, 1), std::sqrt(3.0)) ==
        doctest::Approx(0.75).epsilon(1e-14));
  for (const auto& p : param_grid()) {
    CHECK(cdf(p, 0.0) == 0.0);
    CHECK(cdf(p, 1e300) <= 1.0);
  }
}

TEST_CASE("log_survival values and overflow safety") {
  CHECK(log_survival(BurrParams(1, 1), 1.0) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  for (const auto& p : param_grid()) CHECK(log_survival(p, 0.0) == 0.0);
  // 1e20 = (1e10)^2 is representable, so log1p gives the reference value.
  const double expected = -5.0 * std::log1p(1e20);
  CHECK(log_survival(BurrParams(2, 5), 1e10) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log_survival agrees with ln(1 - cdf)") {
  for (const auto& p : param_grid()) {
    for (double u = 0.05; u < 0.999; u += 0.05) {
      const double x = quantile(p, u);
      const double f = cdf(p, x);
      if (f < 1.0 - 1e-12) {
        CHECK(log_survival(p, x) ==
              doctest::Approx(std::log1p(-f)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("quantile hand values and domain errors") {
  CHECK(quantile(BurrParams(1, 1), 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quantile(BurrParams(2, 1), 0.75) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(quantile(BurrParams(1, 1), 0.0), DomainError);
  CHECK_THROWS_AS(quantile(BurrParams(1, 1), 1.0), DomainError);
  CHECK_THROWS_AS(quantile(BurrParams(1, 1), -0.2), DomainError);
  const double q = quantile(BurrParams(2, 5), 0.999);
  CHECK(std::fabs(cdf(BurrParams(2, 5), q) - 0.999) < 1e-10 * 0.999);
}

TEST_CASE("quantile stays finite deep in the tail for small k") {
  // (1-u)^(-1/k) - 1 overflows in linear space here; the quantile itself
  // is representable.
  const BurrParams p(2.5, 0.05);
  const double u = 1.0 - 1e-16;
  const double x = quantile(p, u);
  CHECK(std::isfinite(x));
  CHECK(x > 0.0);
  CHECK(cdf(p, x) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("quantile round-trips through cdf on random inputs") {
  RandomStream rng(20260809);
  for (int i = 0; i < 1000; ++i) {
    const BurrParams p(testutil::log_uniform(rng, 0.3, 8.0),
                       testutil::log_uniform(rng, 0.3, 8.0));
    const double u = rng.uniform();
    CHECK(std::fabs(cdf(p, quantile(p, u)) - u) < 1e-10);
  }
}

TEST_CASE("sample kernel matches the inverse survival transform") {
  // u = 0.25, c = k = 1: x = u^-1 - 1 = 3.
  CHECK(sample_from_uniform(BurrParams(1, 1), 0.25) ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("sample is deterministic per seed") {
  const BurrParams p(2, 5);
  RandomStream a(42), b(42);
  const auto xs = sample(p, 1000, a);
  const auto ys = sample(p, 1000, b);
  CHECK(xs == ys);
  for (double x : xs) CHECK(x > 0.0);
}

TEST_CASE("sample mean approaches the analytic mean") {
  const BurrParams p(2, 2);
  RandomStream rng(7);
  const auto xs = sample(p, 100000, rng);
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean_hat = s / static_cast<double>(xs.size());
  const double sigma = 0.6189513;  // sqrt(1 - pi^2/16)
  CHECK(std::fabs(mean_hat - std::numbers::pi / 4.0) <
        3.0 * sigma / std::sqrt(1e5));
}

TEST_CASE("sampler passes a K-S check against its own cdf across seeds") {
  const BurrParams p(2, 5);
  const std::size_t n = 10000;
  const double critical = 1.63 / std::sqrt(static_cast<double>(n));
  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomStream rng(seed);
    const auto xs = sample(p, n, rng);
    const double d =
        ks_statistic(xs, [&p](double x) { return cdf(p, x); });
    if (d < critical) ++passed;
  }
  CHECK(passed >= 98);
}

TEST_CASE("mean matches closed form and quadrature") {
  // c = k = 2: mu = 2 Gamma(1.5)^2 / Gamma(3) = pi/4.
  CHECK(mean(BurrParams(2, 2)) ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-13));
  for (auto [cc, kk] : std::vector<std::pair<double, double>>{
           {2.0, 2.0}, {2.0, 5.0}, {3.0, 4.0}}) {
    const BurrParams p(cc, kk);
    const double quad =
        testutil::integrate_moment([&p](double x) { return pdf(p, x); }, 1.0);
    CHECK(mean(p) == doctest::Approx(quad).epsilon(1e-8));
  }
  CHECK_THROWS_AS(mean(BurrParams(1, 1)), MomentUndefinedError);
  CHECK_THROWS_AS(mean(BurrParams(0.5, 1.9)), MomentUndefinedError);
}

TEST_CASE("std_dev matches closed form and quadrature") {
  // c = k = 2: E[X^2] = 2 B(1, 2) = 1 exactly.
  const double expected = std::sqrt(1.0 - std::numbers::pi * std::numbers::pi / 16.0);
  CHECK(std_dev(BurrParams(2, 2)) == doctest::Approx(expected).epsilon(1e-13));
  for (auto [cc, kk] : std::vector<std::pair<double, double>>{
           {2.0, 2.0}, {2.0, 5.0}, {3.0, 4.0}}) {
    const BurrParams p(cc, kk);
    const double m1 =
        testutil::integrate_moment([&p](double x) { return pdf(p, x); }, 1.0);
    const double m2 =
        testutil::integrate_moment([&p](double x) { return pdf(p, x); }, 2.0);
    CHECK(std_dev(p) ==
          doctest::Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(std_dev(BurrParams(1, 2)), MomentUndefinedError);
}

TEST_CASE("moments stay finite where naive gamma overflows") {
  const double m = mean(BurrParams(2.0, 200.0));
  CHECK(std::isfinite(m));
  CHECK(m > 0.0);
}

TEST_CASE("pdf integrates to one across the parameter grid") {
  for (const auto& p : param_grid()) {
    const double total =
        testutil::integrate_moment([&p](double x) { return pdf(p, x); });
    CHECK(std::fabs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("exp(log_pdf) is consistent with pdf") {
  for (const auto& p : param_grid()) {
    for (double u = 0.02; u < 1.0; u += 0.02) {
      const double x = quantile(p, u);
      const double f = pdf(p, x);
      if (f > 1e-300) {
        CHECK(std::exp(log_pdf(p, x)) == doctest::Approx(f).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cdf central difference reproduces pdf") {
  for (const auto& p : param_grid()) {
    // Log-spaced grid over the distribution bulk; below x ~ 0.05 the
    // h = 1e-6 step is too coarse for the steep c < 1 densities and the
    // difference quotient itself loses accuracy.
    const double lo = std::fmax(0.05, quantile(p, 0.05));
    const double hi = quantile(p, 0.99);
    for (int i = 0; i < 20; ++i) {
      const double x = lo * std::pow(hi / lo, i / 19.0);
      const double h = 1e-6 * std::fmax(1.0, x);
      const double fd = (cdf(p, x + h) - cdf(p, x - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(pdf(p, x)).epsilon(1e-5));
    }
  }
}

TEST_CASE("cdf is nondecreasing over sorted grids") {
  for (const auto& p : param_grid()) {
    double prev = 0.0;
    for (double x : {0.0, 1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3, 1e8}) {
      const double f = cdf(p, x);
      CHECK(f >= prev);
      prev = f;
    }
  }
}
