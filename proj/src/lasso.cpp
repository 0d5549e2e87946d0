#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "veracity/glm.hpp"

namespace veracity {

namespace {

double soft_threshold(double g, double lambda) {
  if (g > lambda) return g - lambda;
  if (g < -lambda) return g + lambda;
  return 0.0;
}

struct Standardized {
  Eigen::MatrixXd z;
  Eigen::RowVectorXd center;
  Eigen::RowVectorXd scale;
  std::vector<bool> active;
};

Standardized standardize(const Eigen::MatrixXd& X) {
  Standardized s;
  const auto n = static_cast<double>(X.rows());
  s.center = X.colwise().mean();
  s.scale.resize(X.cols());
  s.active.resize(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double sd = std::sqrt((X.col(j).array() - s.center(j)).square().sum() / n);
    s.active[static_cast<std::size_t>(j)] = sd > 0.0;
    s.scale(j) = sd > 0.0 ? sd : 1.0;
  }
  s.z = (X.rowwise() - s.center).array().rowwise() / s.scale.array();
  return s;
}

double penalized_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double b0, const Eigen::VectorXd& b,
                           double lambda) {
  Eigen::VectorXd eta = (z * b).array() + b0;
  return -logit_log_likelihood(eta, y) / static_cast<double>(y.size()) + lambda * b.lpNorm<1>();
}

}  // namespace

std::vector<std::string> LassoPath::support(std::size_t index) const {
  std::vector<std::string> out;
  for (Eigen::Index j = 0; j < coefficients.cols(); ++j)
    if (coefficients(static_cast<Eigen::Index>(index), j) != 0.0) out.push_back(variables[static_cast<std::size_t>(j)]);
  return out;
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto s = standardize(X);
  const Eigen::VectorXd resid = y.array() - y.mean();
  double lmax = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    if (s.active[static_cast<std::size_t>(j)])
      lmax = std::max(lmax, std::fabs(s.z.col(j).dot(resid)) / static_cast<double>(X.rows()));
  return lmax;
}

LassoPath lasso_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names,
                     std::optional<std::vector<double>> lambdas, const LassoOptions& opts) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (static_cast<Eigen::Index>(names.size()) != k) throw std::invalid_argument("lasso_path: names/columns mismatch");
  const double ybar = y.mean();
  if (ybar <= 0.0 || ybar >= 1.0) throw SeparationError("outcome is constant", names);

  const auto s = standardize(X);
  LassoPath path;
  path.variables = std::move(names);
  path.center = s.center;
  path.scale = s.scale;
  path.lambda_max = lasso_lambda_max(X, y);

  if (lambdas) {
    path.lambdas = *lambdas;
    for (double l : path.lambdas)
      if (!(l >= 0.0)) throw std::invalid_argument("lasso_path: penalties must be non-negative");
    std::sort(path.lambdas.begin(), path.lambdas.end(), std::greater<>());
  } else {
    const int m = std::max(opts.n_lambda, 1);
    for (int i = 0; i < m; ++i) {
      const double frac = m == 1 ? 0.0 : static_cast<double>(i) / (m - 1);
      path.lambdas.push_back(path.lambda_max * std::pow(opts.min_ratio, frac));
    }
  }

  const auto n_lambda = static_cast<Eigen::Index>(path.lambdas.size());
  path.coefficients = Eigen::MatrixXd::Zero(n_lambda, k);
  path.std_coefficients = Eigen::MatrixXd::Zero(n_lambda, k);

  const double null_intercept = std::log(ybar / (1.0 - ybar));
  const auto dn = static_cast<double>(n);
  double b0 = null_intercept;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);

  for (Eigen::Index li = 0; li < n_lambda; ++li) {
    const double lambda = path.lambdas[static_cast<std::size_t>(li)];
    std::vector<double> trace;
    bool converged = false;

    if (lambda >= path.lambda_max) {
      // KKT holds at zero slopes; the intercept is the null-model MLE.
      b0 = null_intercept;
      b.setZero();
      trace.push_back(penalized_objective(s.z, y, b0, b, lambda));
      converged = true;
    } else {
      double obj = penalized_objective(s.z, y, b0, b, lambda);
      trace.push_back(obj);
      for (int outer = 0; outer < opts.max_outer; ++outer) {
        const Eigen::VectorXd eta = (s.z * b).array() + b0;
        const Eigen::VectorXd p = eta.unaryExpr([](double e) { return logistic(e); });
        const Eigen::VectorXd w = (p.array() * (1.0 - p.array())).max(1e-10);
        Eigen::VectorXd r = (y - p).array() / w.array();  // working residual
        const double sw = w.sum();
        Eigen::VectorXd h(k);
        for (Eigen::Index j = 0; j < k; ++j) h(j) = (w.array() * s.z.col(j).array().square()).sum() / dn;

        // Coordinate descent on the weighted least-squares approximation.
        double c0 = b0;
        Eigen::VectorXd c = b;
        for (int sweep = 0; sweep < opts.max_inner; ++sweep) {
          double max_delta = 0.0;
          const double d0 = w.dot(r) / sw;
          c0 += d0;
          r.array() -= d0;
          max_delta = std::max(max_delta, d0 * d0 * sw / dn);
          for (Eigen::Index j = 0; j < k; ++j) {
            if (!s.active[static_cast<std::size_t>(j)]) continue;
            const double g = (w.array() * s.z.col(j).array() * r.array()).sum() / dn + h(j) * c(j);
            const double updated = soft_threshold(g, lambda) / h(j);
            const double d = updated - c(j);
            if (d != 0.0) {
              r -= d * s.z.col(j);
              c(j) = updated;
              max_delta = std::max(max_delta, h(j) * d * d);
            }
          }
          if (std::sqrt(max_delta) < opts.tolerance) break;
        }

        // Backtracking along the proximal Newton direction.
        const double d0 = c0 - b0;
        const Eigen::VectorXd d = c - b;
        double t = 1.0;
        double obj_new = penalized_objective(s.z, y, b0 + d0, b + d, lambda);
        while (obj_new > obj && t > 1e-12) {
          t *= 0.5;
          obj_new = penalized_objective(s.z, y, b0 + t * d0, b + t * d, lambda);
        }
        if (obj_new > obj) {
          converged = true;  // no descent left at working precision
          break;
        }
        b0 += t * d0;
        b += t * d;
        const double decrease = obj - obj_new;
        obj = obj_new;
        trace.push_back(obj);
        const double step = std::max(std::fabs(t * d0), (t * d).cwiseAbs().maxCoeff());
        if (step < 1e-10 || decrease <= 1e-16 * std::max(1.0, std::fabs(obj))) {
          converged = true;
          break;
        }
      }
    }

    path.std_intercepts.push_back(b0);
    path.std_coefficients.row(li) = b.transpose();
    Eigen::RowVectorXd orig = b.transpose().array() / s.scale.array();
    path.coefficients.row(li) = orig;
    path.intercepts.push_back(b0 - orig.dot(s.center));
    path.converged.push_back(converged);
    path.objective_trace.push_back(std::move(trace));
  }
  return path;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int k_folds, std::uint64_t seed) {
  if (k_folds < 2) throw std::invalid_argument("need at least two folds");
  std::mt19937_64 rng(seed);
  std::vector<int> folds(labels.size(), 0);
  int next = 0;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    // Fisher-Yates with explicit draws so the permutation does not depend on
    // the standard library's shuffle.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    for (auto i : idx) {
      folds[i] = next;
      next = (next + 1) % k_folds;
    }
  }
  return folds;
}

CvSelection cv_select_lambda(const FeatureMatrix& data, const std::vector<std::string>& pool, int k_folds,
                             std::uint64_t seed, LambdaRule rule, const LassoOptions& opts) {
  if (k_folds < 2) throw std::invalid_argument("cross-validation needs at least two folds");
  const Eigen::MatrixXd X = data.select(pool);
  const Eigen::VectorXd y = data.y();

  CvSelection sel;
  sel.seed = seed;
  sel.path = lasso_path(X, y, pool, std::nullopt, opts);
  const auto& lambdas = sel.path.lambdas;
  const std::size_t m = lambdas.size();

  const auto folds = stratified_folds(data.labels, k_folds, seed);
  std::vector<std::vector<double>> errors(m, std::vector<double>(static_cast<std::size_t>(k_folds), 0.0));
  for (int f = 0; f < k_folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    Eigen::MatrixXd x_train = X(train, Eigen::all);
    Eigen::MatrixXd x_test = X(test, Eigen::all);
    Eigen::VectorXd y_train = y(train);
    Eigen::VectorXd y_test = y(test);
    auto single_class = [](const Eigen::VectorXd& v) { return v.size() == 0 || v.minCoeff() == v.maxCoeff(); };
    if (single_class(y_train) || single_class(y_test))
      throw std::invalid_argument(
          fmt::format("fold {} contains a single class; re-stratify with fewer folds", f));

    auto fold_path = lasso_path(x_train, y_train, pool, lambdas, opts);
    for (std::size_t l = 0; l < m; ++l) {
      Eigen::VectorXd eta = (x_test * fold_path.coefficients.row(static_cast<Eigen::Index>(l)).transpose()).array() +
                            fold_path.intercepts[l];
      errors[l][static_cast<std::size_t>(f)] = -2.0 * logit_log_likelihood(eta, y_test) / static_cast<double>(y_test.size());
    }
  }

  sel.path.cv_mean.resize(m);
  sel.path.cv_se.resize(m);
  for (std::size_t l = 0; l < m; ++l) {
    double mean = 0.0;
    for (double e : errors[l]) mean += e;
    mean /= k_folds;
    double var = 0.0;
    for (double e : errors[l]) var += (e - mean) * (e - mean);
    var /= (k_folds - 1);
    sel.path.cv_mean[l] = mean;
    sel.path.cv_se[l] = std::sqrt(var / k_folds);
  }

  std::size_t best = 0;
  for (std::size_t l = 1; l < m; ++l)
    if (sel.path.cv_mean[l] < sel.path.cv_mean[best]) best = l;
  if (rule == LambdaRule::one_se) {
    const double bound = sel.path.cv_mean[best] + sel.path.cv_se[best];
    for (std::size_t l = 0; l <= best; ++l)
      if (sel.path.cv_mean[l] <= bound) {
        best = l;
        break;
      }
  }
  sel.index = best;
  sel.lambda = lambdas[best];
  sel.path.selected = best;
  sel.support = sel.path.support(best);
  sel.model = fit_logit(data, sel.support);
  sel.model.method = "lasso";
  sel.model.seed = seed;
  sel.model.lambda = sel.lambda;
  return sel;
}

}  // namespace veracity
