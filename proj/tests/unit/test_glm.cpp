#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "veracity/glm.hpp"
#include "veracity/model_io.hpp"

using namespace veracity;

namespace {

oracle::Mat rows_of(const Eigen::MatrixXd& X) {
  oracle::Mat rows(static_cast<std::size_t>(X.rows()), oracle::Vec(static_cast<std::size_t>(X.cols())));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) rows[i][j] = X(i, j);
  return rows;
}

oracle::Vec vec_of(const Eigen::VectorXd& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

Eigen::VectorXd score(const LogitModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd resid = y - predict_proba(m, X);
  Eigen::VectorXd s(X.cols() + 1);
  s(0) = resid.sum();
  s.tail(X.cols()) = X.transpose() * resid;
  return s;
}

FeatureMatrix planted(std::uint64_t seed, std::size_t n = 400) {
  // x1 carries the signal; x2..x4 are noise.
  return synthetic::logit_data(n, {-0.5, 1.2, 0.0, 0.0, 0.0}, seed);
}

}  // namespace

TEST_CASE("aic counts the intercept") {
  CHECK(aic(-203.60, 10) == doctest::Approx(429.20).epsilon(1e-12));
  CHECK(aic(-197.89, 28) == doctest::Approx(453.78).epsilon(1e-12));
  CHECK(aic(-206.96, 15) == doctest::Approx(445.92).epsilon(1e-12));
  CHECK(aic(-194.74, 25) == doctest::Approx(441.48).epsilon(1e-12));
  LogitModel m;
  m.log_likelihood = -10.0;
  m.variables = {"a", "b"};
  CHECK(aic(m) == 26.0);
}

TEST_CASE("intercept-only model has the closed form") {
  Eigen::MatrixXd X(447, 0);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(447);
  y.head(132).setOnes();
  const auto m = fit_logit(X, y, {});
  CHECK(m.intercept == doctest::Approx(std::log(132.0 / 315.0)).epsilon(1e-10));
  const double ll = 132.0 * std::log(132.0 / 447.0) + 315.0 * std::log(315.0 / 447.0);
  CHECK(m.log_likelihood == doctest::Approx(ll).epsilon(1e-12));
  CHECK(m.log_likelihood == doctest::Approx(-271.3).epsilon(1e-3));
  CHECK(m.train_base_rate == doctest::Approx(132.0 / 447.0));
  CHECK(m.aic == doctest::Approx(-2.0 * ll + 2.0));
}

TEST_CASE("constant outcome is rejected") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(20, 2);
  CHECK_THROWS_AS(fit_logit(X, Eigen::VectorXd::Zero(20), {"a", "b"}), SeparationError);
  CHECK_THROWS_AS(fit_logit(X, Eigen::VectorXd::Ones(20), {"a", "b"}), SeparationError);
}

TEST_CASE("degenerate designs are rejected") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(20, 2);
  X.col(1).setConstant(3.0);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(20);
  y.head(7).setOnes();
  CHECK_THROWS_AS(fit_logit(X, y, {"a", "b"}), DegenerateDataError);
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Random(3, 2);
  CHECK_THROWS_AS(fit_logit(tiny, Eigen::Vector3d(0, 1, 0), {"a", "b"}), DegenerateDataError);
}

TEST_CASE("perfect separation is reported with the variables") {
  Eigen::MatrixXd X(30, 1);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    X(i, 0) = i;
    y(i) = i >= 15 ? 1.0 : 0.0;
  }
  try {
    fit_logit(X, y, {"x"});
    FAIL("expected separation");
  } catch (const SeparationError& e) {
    CHECK(e.variables == std::vector<std::string>{"x"});
  }
}

TEST_CASE("fit_logit matches the Newton oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t k = 1 + seed % 4;
    std::vector<double> beta = {-0.3};
    for (std::size_t j = 0; j < k; ++j) beta.push_back(0.8 * std::pow(-1.0, j) / (1.0 + j));
    const auto data = synthetic::logit_data(50, beta, seed);
    const auto m = fit_logit(data, data.columns);
    const auto ref = oracle::newton_logit(rows_of(data.values), vec_of(data.y()));
    CHECK(std::fabs(m.intercept - ref[0]) < 1e-6);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::fabs(m.coefficients(static_cast<Eigen::Index>(j)) - ref[j + 1]) < 1e-6);
    CHECK(m.log_likelihood == doctest::Approx(oracle::log_likelihood(rows_of(data.values), vec_of(data.y()), ref)).epsilon(1e-10));
  }
}

TEST_CASE("property: score equations, covariance and base rate at the MLE") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto data = synthetic::logit_data(200, {0.4, 0.9, -0.02, 4.0}, seed, {1.0, 30.0, 0.05});
    const auto m = fit_logit(data, data.columns);
    CHECK(m.converged);
    const auto s = score(m, data.values, data.y());
    CHECK(s.cwiseAbs().maxCoeff() < 1e-6);
    const Eigen::VectorXd p = predict_proba(m, data);
    CHECK(std::fabs(p.mean() - data.y().mean()) < 1e-8);
    CHECK((m.covariance - m.covariance.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.covariance);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK(m.aic == doctest::Approx(-2.0 * m.log_likelihood + 2.0 * 4.0).epsilon(1e-14));
  }
}

TEST_CASE("property: analytic gradient matches finite differences") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = synthetic::logit_data(40, {0.1, 0.5, -0.5}, seed);
    const Eigen::VectorXd y = data.y();
    Eigen::MatrixXd Z(data.rows(), 3);
    Z.col(0).setOnes();
    Z.rightCols(2) = data.values;
    Eigen::VectorXd b(3);
    for (int j = 0; j < 3; ++j) b(j) = normal(rng);
    const Eigen::VectorXd eta = Z * b;
    const Eigen::VectorXd p = eta.unaryExpr([](double e) { return logistic(e); });
    const Eigen::VectorXd grad = Z.transpose() * (y - p);
    const double h = 1e-5;
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd up = b, down = b;
      up(j) += h;
      down(j) -= h;
      const double fd = (logit_log_likelihood(Z * up, y) - logit_log_likelihood(Z * down, y)) / (2.0 * h);
      CHECK(std::fabs(fd - grad(j)) <= 1e-6 * std::max(1.0, std::fabs(grad(j))));
    }
  }
}

TEST_CASE("logit_log_likelihood is stable for large linear predictors") {
  Eigen::VectorXd eta(4);
  eta << 800.0, -800.0, 40.0, -40.0;
  Eigen::VectorXd y(4);
  y << 1, 0, 0, 1;
  const double ll = logit_log_likelihood(eta, y);
  CHECK(std::isfinite(ll));
  CHECK(ll == doctest::Approx(-80.0).epsilon(1e-12));
}

TEST_CASE("property: adding a variable never lowers the maximized LL") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto data = synthetic::logit_data(150, {-0.2, 0.7, 0.0, -0.4, 0.0}, seed);
    std::vector<std::string> vars;
    double prev = fit_logit(data, vars).log_likelihood;
    for (const auto& c : data.columns) {
      vars.push_back(c);
      const double ll = fit_logit(data, vars).log_likelihood;
      CHECK(ll >= prev - 1e-8);
      prev = ll;
    }
  }
}

TEST_CASE("predict_proba matches columns by name") {
  const auto data = planted(3);
  const auto m = fit_logit(data, {"x3", "x1"});
  auto reordered = data.subset_columns({"x1", "x2", "x3"});
  const Eigen::VectorXd a = predict_proba(m, data);
  const Eigen::VectorXd b = predict_proba(m, reordered);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  CHECK(predict_proba(m, zero)(0) == doctest::Approx(logistic(m.intercept)).epsilon(1e-15));
  CHECK_THROWS_AS(predict_proba(m, data.subset_columns({"x1", "x2"})), std::out_of_range);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(1, 2);
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(predict_proba(m, bad), std::domain_error);
}

TEST_CASE("forward selection finds the planted variable and stops") {
  int exact = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = planted(seed);
    const auto r = stepwise_forward(data, data.columns);
    CHECK(r.model.variables.front() == "x1");
    exact += r.model.variables == std::vector<std::string>{"x1"};
    // Accepted rounds strictly lower AIC.
    double last = INFINITY;
    for (const auto& rec : r.log)
      if (rec.accepted) {
        CHECK(rec.aic < last);
        last = rec.aic;
      }
    CHECK(r.model.aic == doctest::Approx(last));
  }
  // Noise variables occasionally pass the AIC bar (about 16% each).
  CHECK(exact >= 4);
}

TEST_CASE("forward selection on an empty pool is intercept-only") {
  const auto data = planted(1);
  const auto r = stepwise_forward(data, {});
  CHECK(r.model.variables.empty());
  CHECK(r.model.intercept == doctest::Approx(std::log(data.y().mean() / (1.0 - data.y().mean()))));
}

TEST_CASE("forward selection honours an explicit start") {
  const auto data = planted(2);
  const auto r = stepwise_forward(data, data.columns, std::string("x3"));
  CHECK(r.model.variables.front() == "x3");
  CHECK(std::find(r.model.variables.begin(), r.model.variables.end(), "x1") != r.model.variables.end());
  CHECK_THROWS_AS(stepwise_forward(data, {"x1"}, std::string("x4")), std::invalid_argument);
}

TEST_CASE("backward selection") {
  // A single irrelevant variable: dropped whenever that lowers AIC.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = synthetic::logit_data(300, {-0.3, 0.0}, seed);
    const auto full = fit_logit(data, {"x1"});
    const auto null = fit_logit(data, {});
    const auto r = stepwise_backward(data, {"x1"});
    CHECK(r.model.variables.empty() == (null.aic < full.aic));
  }
  // Strong signal on every pool variable: nothing is removed.
  const auto strong = synthetic::logit_data(500, {0.2, 1.0, -1.0, 0.8}, 9);
  CHECK(stepwise_backward(strong, strong.columns).model.variables == strong.columns);
}

TEST_CASE("forward and backward agree when the signal is clear") {
  const auto data = synthetic::logit_data(600, {-0.4, 1.0, -0.9, 0.0, 0.0, 0.0}, 12);
  auto fwd = stepwise_forward(data, data.columns).model.variables;
  auto bwd = stepwise_backward(data, data.columns).model.variables;
  std::sort(fwd.begin(), fwd.end());
  std::sort(bwd.begin(), bwd.end());
  CHECK(fwd == bwd);
}

TEST_CASE("property: stepwise results do not depend on row order") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = synthetic::logit_data(250, {-0.4, 0.8, 0.3, 0.0, -0.5}, seed);
    std::vector<std::size_t> order(static_cast<std::size_t>(data.rows()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    const auto shuffled = data.subset_rows(order);
    const auto a = stepwise_forward(data, data.columns);
    const auto b = stepwise_forward(shuffled, shuffled.columns);
    CHECK(a.model.variables == b.model.variables);
    CHECK(a.model.aic == doctest::Approx(b.model.aic).epsilon(1e-10));
    CHECK(stepwise_backward(data, data.columns).model.variables ==
          stepwise_backward(shuffled, shuffled.columns).model.variables);
  }
}

TEST_CASE("stepwise skips candidates that separate") {
  auto data = planted(4, 200);
  data.columns.push_back("leak");
  data.values.conservativeResize(Eigen::NoChange, data.cols() + 1);
  for (Eigen::Index i = 0; i < data.rows(); ++i) data.values(i, data.cols() - 1) = data.labels[i] ? 1.0 + i : -1.0 - i;
  const auto r = stepwise_forward(data, data.columns, std::string("x1"));
  CHECK(std::find(r.model.variables.begin(), r.model.variables.end(), "leak") == r.model.variables.end());
  bool logged = false;
  for (const auto& rec : r.log) logged |= rec.action == "skip" && rec.variable == "leak";
  CHECK(logged);
}

TEST_CASE("restrict_pool orders by F") {
  std::vector<AnovaRow> rows(4);
  rows[0] = {"a", 0, 0, 3.0, 0.08};
  rows[1] = {"b", 0, 0, 12.0, 0.0005};
  rows[2] = {"c", 0, 0, 7.5, 0.006};
  rows[3] = {"d", 0, 0, 12.0, 0.0005};
  CHECK(restrict_pool(rows, 0.01) == std::vector<std::string>{"b", "d", "c"});
  CHECK(restrict_pool(rows, 0.001) == std::vector<std::string>{"b", "d"});
  CHECK(restrict_pool(rows, 0.0).empty());
}

TEST_CASE("marginal effects") {
  const auto data = synthetic::logit_data(20, {-0.2, 0.9, -0.4}, 8);
  const auto m = fit_logit(data, data.columns);
  const auto me = marginal_effects(m, data);
  REQUIRE(me.rows.size() == 2);
  // Average finite-difference change in probability.
  const double h = 1e-6;
  for (Eigen::Index j = 0; j < 2; ++j) {
    Eigen::MatrixXd up = data.values, down = data.values;
    up.col(j).array() += h;
    down.col(j).array() -= h;
    const double fd = (predict_proba(m, up) - predict_proba(m, down)).mean() / (2.0 * h);
    CHECK(std::fabs(me.rows[j].effect - fd) < 1e-6);
    CHECK((me.rows[j].effect > 0) == (m.coefficients(j) > 0));
    CHECK(me.rows[j].std_error > 0.0);
    CHECK(me.rows[j].p_value >= 0.0);
    CHECK(me.rows[j].p_value <= 1.0);
    CHECK(me.rows[j].z == doctest::Approx(me.rows[j].effect / me.rows[j].std_error));
  }

  auto zeroed = m;
  zeroed.coefficients(1) = 0.0;
  CHECK(marginal_effects(zeroed, data).rows[1].effect == 0.0);

  const auto at_means = marginal_effects(m, data, MarginalKind::at_means);
  const Eigen::RowVectorXd xbar = data.values.colwise().mean();
  const double p = logistic(m.linear_predictor(xbar));
  CHECK(at_means.rows[0].effect == doctest::Approx(m.coefficients(0) * p * (1 - p)).epsilon(1e-12));

  auto unconverged = m;
  unconverged.converged = false;
  CHECK_THROWS_AS(marginal_effects(unconverged, data), std::invalid_argument);
}

TEST_CASE("delta-method standard errors match a numerical Jacobian") {
  const auto data = synthetic::logit_data(120, {0.3, 0.7, -0.5}, 17);
  const auto m = fit_logit(data, data.columns);
  const auto me = marginal_effects(m, data);
  const Eigen::Index k = 2;
  auto ame = [&](const Eigen::VectorXd& theta, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double p = logistic(theta(0) + data.values.row(i).dot(theta.tail(k)));
      s += theta(1 + j) * p * (1 - p);
    }
    return s / static_cast<double>(data.rows());
  };
  Eigen::VectorXd theta(k + 1);
  theta(0) = m.intercept;
  theta.tail(k) = m.coefficients;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd g(k + 1);
    for (Eigen::Index t = 0; t <= k; ++t) {
      Eigen::VectorXd up = theta, down = theta;
      up(t) += 1e-6;
      down(t) -= 1e-6;
      g(t) = (ame(up, j) - ame(down, j)) / 2e-6;
    }
    const double se = std::sqrt(g.dot(m.covariance * g));
    CHECK(me.rows[j].std_error == doctest::Approx(se).epsilon(1e-6));
  }
}

TEST_CASE("model JSON round-trips") {
  const auto data = planted(6);
  auto m = fit_logit(data, {"x1", "x2"});
  m.method = "forward";
  m.seed = 42;
  m.dictionary_fingerprint = "0123456789abcdef";
  std::ostringstream out;
  write_model(out, m);
  std::istringstream in(out.str());
  const auto back = read_model(in);
  CHECK(back.variables == m.variables);
  CHECK(back.intercept == m.intercept);
  CHECK(back.coefficients == m.coefficients);
  CHECK(back.covariance == m.covariance);
  CHECK(back.log_likelihood == m.log_likelihood);
  CHECK(back.aic == m.aic);
  CHECK(back.train_base_rate == m.train_base_rate);
  CHECK(back.seed == m.seed);
  CHECK(back.method == "forward");
  CHECK(back.dictionary_fingerprint == m.dictionary_fingerprint);
  std::ostringstream again;
  write_model(again, back);
  CHECK(again.str() == out.str());
}
