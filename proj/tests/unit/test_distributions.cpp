#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "veracity/distributions.hpp"

using namespace veracity;

TEST_CASE("regularized_beta against Boost") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> log_shape(std::log(0.05), std::log(5000.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double a = std::exp(log_shape(rng)), b = std::exp(log_shape(rng)), x = unit(rng);
    const double expected = boost::math::ibeta(a, b, x);
    const double got = regularized_beta(x, a, b);
    if (expected > 1e-280) {
      CHECK(std::fabs(got - expected) <= 1e-12 * expected + 1e-300);
    } else {
      CHECK(got <= 1e-270);
    }
  }
}

TEST_CASE("regularized_beta edge values") {
  CHECK(regularized_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(regularized_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK(regularized_beta(0.3, 1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(regularized_beta(0.5, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_beta(1.5, 1.0, 1.0), std::domain_error);
}

TEST_CASE("F distribution tails against Boost") {
  const std::vector<std::pair<double, double>> dfs = {{1, 445}, {84, 362}, {1, 8}, {5, 20}, {28, 418}};
  for (auto [d1, d2] : dfs) {
    boost::math::fisher_f dist(d1, d2);
    for (double f : {0.01, 0.5, 1.0, 2.37, 7.0, 45.81}) {
      const double expected = boost::math::cdf(boost::math::complement(dist, f));
      CHECK(f_sf(f, d1, d2) == doctest::Approx(expected).epsilon(1e-11));
      CHECK(f_cdf(f, d1, d2) == doctest::Approx(1.0 - expected).epsilon(1e-11));
    }
  }
  CHECK(f_sf(0.0, 3, 10) == 1.0);
  CHECK(f_sf(INFINITY, 3, 10) == 0.0);
}

TEST_CASE("normal_two_sided_p") {
  CHECK(normal_two_sided_p(0.0) == 1.0);
  CHECK(normal_two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(normal_two_sided_p(-1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
}
