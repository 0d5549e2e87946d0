#include <doctest.h>

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "support/oracles.hpp"
#include "veracity/distributions.hpp"
#include "veracity/stats.hpp"

using namespace veracity;

namespace {

FeatureMatrix random_matrix(std::uint64_t seed, int n, int p, double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMatrix m;
  for (int j = 0; j < p; ++j) m.columns.push_back(fmt::format("v{}", j));
  m.values.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const int label = i % 3 == 0 ? 1 : 0;
    m.labels.push_back(label);
    m.ids.push_back(fmt::format("r{}", i));
    for (int j = 0; j < p; ++j) m.values(i, j) = normal(rng) * (1.0 + j) + (label ? shift * (j % 2 ? 1 : -1) : 0.0);
  }
  return m;
}

}  // namespace

TEST_CASE("anova F equals the squared pooled t") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = random_matrix(seed, 20, 3, 0.7);
    const auto rows = anova_table(m);
    REQUIRE(rows.size() == 3);
    for (Eigen::Index j = 0; j < 3; ++j) {
      oracle::Vec a, b;
      for (Eigen::Index i = 0; i < m.rows(); ++i) (m.labels[i] ? b : a).push_back(m.values(i, j));
      const double t2 = oracle::pooled_t_squared(a, b);
      CHECK(rows[j].F == doctest::Approx(t2).epsilon(1e-10));
      CHECK(rows[j].p_value == doctest::Approx(f_sf(t2, 1, 18)).epsilon(1e-10));
      CHECK(rows[j].F >= 0.0);
      CHECK(rows[j].p_value >= 0.0);
      CHECK(rows[j].p_value <= 1.0);
      CHECK(rows[j].stars() == significance_stars(rows[j].p_value));
    }
  }
}

TEST_CASE("anova on a constant column is flagged degenerate") {
  FeatureMatrix m;
  m.columns = {"c"};
  m.values = Eigen::MatrixXd::Constant(6, 1, 2.5);
  m.labels = {0, 1, 0, 1, 0, 1};
  m.ids = {"a", "b", "c", "d", "e", "f"};
  const auto rows = anova_table(m);
  CHECK(rows[0].F == 0.0);
  CHECK(rows[0].p_value == 1.0);
  CHECK(rows[0].degenerate);
  m.labels = {0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(anova_table(m), std::invalid_argument);
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.0005) == "***");
  CHECK(significance_stars(0.005) == "**");
  CHECK(significance_stars(0.03) == "*");
  CHECK(significance_stars(0.2) == "");
}

TEST_CASE("single-variable MANOVA reduces to eta squared") {
  FeatureMatrix m;
  m.columns = {"x"};
  m.values.resize(10, 1);
  m.values << 1, 2, 3, 4, 5, 3, 5, 6, 7, 9;
  m.labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  for (int i = 0; i < 10; ++i) m.ids.push_back(std::to_string(i));
  // Group means 3 and 6, grand mean 4.5: SS_between = 22.5, SS_total = 22.5 + 10 + 20.
  const double eta2 = 22.5 / 52.5;
  const auto r = manova_pillai(m);
  CHECK(r.pillai == doctest::Approx(eta2).epsilon(1e-12));
  CHECK(r.eta_p_sq == r.pillai);
  CHECK(r.df1 == 1.0);
  CHECK(r.df2 == 8.0);
  const auto rows = anova_table(m);
  CHECK(r.F == doctest::Approx(rows[0].F).epsilon(1e-10));
  CHECK(std::fabs(r.p_value - rows[0].p_value) < 1e-9);
  CHECK(rows[0].F == doctest::Approx(22.5 / (30.0 / 8.0)).epsilon(1e-12));
}

TEST_CASE("MANOVA detects collinear columns") {
  auto m = random_matrix(5, 30, 3, 0.5);
  m.columns.push_back("dup");
  m.values.conservativeResize(Eigen::NoChange, 4);
  m.values.col(3) = 2.0 * m.values.col(0) - m.values.col(2);
  try {
    manova_pillai(m);
    FAIL("expected collinearity");
  } catch (const CollinearityError& e) {
    CHECK(e.dependent_columns == std::vector<std::string>{"dup"});
  }
}

TEST_CASE("MANOVA rejects too few rows") {
  const auto m = random_matrix(5, 6, 5, 0.5);
  CHECK_THROWS_AS(manova_pillai(m), std::invalid_argument);
}

TEST_CASE("property: MANOVA F identity, bounds and significance counts") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto m = random_matrix(seed, 60, 1 + static_cast<int>(seed % 8), 0.4);
    const auto r = manova_pillai(m);
    CHECK(r.pillai >= 0.0);
    CHECK(r.pillai <= 1.0);
    CHECK(r.df1 == m.cols());
    CHECK(r.df2 == m.rows() - m.cols() - 1);
    CHECK(std::fabs(r.F - (r.df2 / r.df1) * r.pillai / (1.0 - r.pillai)) <= 1e-10 * std::max(1.0, r.F));
    CHECK(r.p_value == doctest::Approx(f_sf(r.F, r.df1, r.df2)).epsilon(1e-12));
    int n05 = 0;
    for (const auto& row : r.univariate) n05 += row.p_value < 0.05;
    CHECK(r.n_significant_05 == n05);
    CHECK(r.n_significant_01 <= r.n_significant_05);
    CHECK(r.n_significant_001 <= r.n_significant_01);
  }
}

TEST_CASE("property: MANOVA is invariant to per-column affine maps") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> offset(-1000.0, 1000.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = random_matrix(seed, 50, 6, 0.5);
    const double v = manova_pillai(m).pillai;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double s = (rng() % 2 ? 1.0 : -1.0) * scale(rng);
      m.values.col(j) = (m.values.col(j).array() * s + offset(rng)).matrix();
    }
    CHECK(manova_pillai(m).pillai == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("property: label swap leaves MANOVA and ANOVA unchanged") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = random_matrix(seed, 40, 4, 0.6);
    const auto before = manova_pillai(m);
    for (auto& l : m.labels) l = 1 - l;
    const auto after = manova_pillai(m);
    CHECK(after.pillai == doctest::Approx(before.pillai).epsilon(1e-12));
    CHECK(after.F == doctest::Approx(before.F).epsilon(1e-10));
    for (std::size_t j = 0; j < before.univariate.size(); ++j) {
      CHECK(after.univariate[j].F == doctest::Approx(before.univariate[j].F).epsilon(1e-12));
      CHECK(after.univariate[j].mean_correct == doctest::Approx(before.univariate[j].mean_incorrect));
    }
  }
}

TEST_CASE("MANOVA under permuted labels is not systematically significant") {
  // Under the null, V follows Beta(p/2, (N-p-1)/2) with mean p/(N-1).
  const int n = 80, p = 5;
  auto m = random_matrix(101, n, p, 0.0);
  std::mt19937_64 rng(202);
  std::vector<double> vs, ps;
  for (int rep = 0; rep < 1000; ++rep) {
    for (std::size_t i = m.labels.size(); i > 1; --i) std::swap(m.labels[i - 1], m.labels[rng() % i]);
    const auto r = manova_pillai(m);
    vs.push_back(r.pillai);
    ps.push_back(r.p_value);
  }
  double mean_v = 0.0;
  for (double v : vs) mean_v += v;
  mean_v /= static_cast<double>(vs.size());
  CHECK(mean_v == doctest::Approx(static_cast<double>(p) / (n - 1)).epsilon(0.1));
  std::sort(ps.begin(), ps.end());
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9})
    CHECK(std::fabs(ps[static_cast<std::size_t>(q * ps.size())] - q) < 0.06);
}
