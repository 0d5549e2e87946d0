#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "veracity/feature_matrix.hpp"
#include "veracity/stats.hpp"

namespace veracity {

struct FitError : std::runtime_error {
  FitError(const std::string& what, std::vector<std::string> vars)
      : std::runtime_error(what), variables(std::move(vars)) {}
  std::vector<std::string> variables;
};

// Outcome constant or coefficients diverging with the likelihood still improving.
struct SeparationError : FitError {
  using FitError::FitError;
};
struct ConvergenceError : FitError {
  using FitError::FitError;
};
// Too few rows for the number of parameters, or a zero-variance column.
struct DegenerateDataError : FitError {
  using FitError::FitError;
};

inline constexpr int kMaxIrlsIterations = 100;
// Largest |beta_j * sd(x_j)| tolerated while the log-likelihood still improves.
inline constexpr double kSeparationThreshold = 15.0;

struct LogitModel {
  std::vector<std::string> variables;
  double intercept = 0.0;
  Eigen::VectorXd coefficients;  // aligned with variables
  double log_likelihood = 0.0;
  double aic = 0.0;
  // Inverse observed information, intercept first.
  Eigen::MatrixXd covariance;
  double train_base_rate = 0.0;
  bool converged = false;
  int n_iter = 0;
  std::size_t n_obs = 0;

  // Provenance, carried into the serialized model.
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::string dictionary_fingerprint;

  std::size_t k() const { return variables.size(); }
  double linear_predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

// -2 LL + 2 (k + 1); the intercept counts as a parameter.
double aic(double log_likelihood, std::size_t k);
double aic(const LogitModel& model);

double logistic(double eta);
// Sum of y log p + (1 - y) log(1 - p) for p = logistic(eta), stable for large |eta|.
double logit_log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y);

// Maximum likelihood by iteratively reweighted least squares. X excludes the
// intercept column; y holds 0/1 with 1 = incorrect.
LogitModel fit_logit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names);
LogitModel fit_logit(const FeatureMatrix& data, const std::vector<std::string>& variables);

// Columns are matched to model.variables by name. Throws std::out_of_range on
// a missing column and std::domain_error on a non-finite feature.
Eigen::VectorXd predict_proba(const LogitModel& model, const FeatureMatrix& data);
Eigen::VectorXd predict_proba(const LogitModel& model, const Eigen::MatrixXd& X);

struct StepRecord {
  int round = 0;
  std::string action;  // start, add, remove, skip, stop
  std::string variable;
  double aic = 0.0;
  bool accepted = false;
  std::string note;
};

struct SelectionResult {
  LogitModel model;
  std::vector<StepRecord> log;
};

// Greedy forward selection on AIC. Starts from `start` (default: the pool
// variable with the highest ANOVA F that can be fitted alone) and adds the
// candidate with the lowest AIC until no addition strictly lowers it. Ties go
// to the earlier pool entry. Candidates whose fit fails are skipped and logged.
SelectionResult stepwise_forward(const FeatureMatrix& data, const std::vector<std::string>& pool,
                                 std::optional<std::string> start = std::nullopt);
// Mirror image of forward, starting from the full pool.
SelectionResult stepwise_backward(const FeatureMatrix& data, const std::vector<std::string>& pool);

// Variables with p < alpha, highest F first.
std::vector<std::string> restrict_pool(const std::vector<AnovaRow>& anova, double alpha);

struct LassoOptions {
  int n_lambda = 100;
  double min_ratio = 1e-3;
  int max_outer = 100;
  int max_inner = 100000;
  double tolerance = 1e-12;
};

struct LassoPath {
  std::vector<std::string> variables;
  std::vector<double> lambdas;            // decreasing
  Eigen::MatrixXd coefficients;           // lambda x variable, original scale
  std::vector<double> intercepts;         // original scale
  Eigen::MatrixXd std_coefficients;       // standardized scale
  std::vector<double> std_intercepts;
  std::vector<bool> converged;
  // Penalized objective after each proximal Newton step, per lambda.
  std::vector<std::vector<double>> objective_trace;
  Eigen::RowVectorXd center;
  Eigen::RowVectorXd scale;
  double lambda_max = 0.0;

  std::vector<double> cv_mean;
  std::vector<double> cv_se;
  std::optional<std::size_t> selected;

  std::vector<std::string> support(std::size_t index) const;
};

// Smallest penalty at which every slope is zero, on standardized predictors:
// max_j |mean_i z_ij (y_i - ybar)|.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// L1-penalized logistic regression, objective -LL/N + lambda * sum |beta_j|
// on internally standardized predictors (population sd), unpenalized
// intercept. The default grid is n_lambda log-spaced values from lambda_max
// down to min_ratio * lambda_max.
LassoPath lasso_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names,
                     std::optional<std::vector<double>> lambdas = std::nullopt, const LassoOptions& opts = {});

enum class LambdaRule { min, one_se };

struct CvSelection {
  LassoPath path;
  std::size_t index = 0;
  double lambda = 0.0;
  std::vector<std::string> support;
  LogitModel model;  // unpenalized refit on the support
  std::uint64_t seed = 0;
};

// Fold assignment (0..k-1) per row, stratified by label, seeded.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k_folds, std::uint64_t seed);

// k-fold CV over the lasso path; selects by mean out-of-fold deviance.
// Throws std::invalid_argument for k_folds < 2 or when a fold ends up with a
// single class.
CvSelection cv_select_lambda(const FeatureMatrix& data, const std::vector<std::string>& pool, int k_folds,
                             std::uint64_t seed, LambdaRule rule = LambdaRule::min, const LassoOptions& opts = {});

enum class MarginalKind { average, at_means };

struct MarginalEffect {
  std::string variable;
  double effect = 0.0;
  double std_error = 0.0;  // delta method
  double z = 0.0;
  double p_value = 1.0;
};

struct MarginalEffects {
  MarginalKind kind = MarginalKind::average;
  std::vector<MarginalEffect> rows;
};

MarginalEffects marginal_effects(const LogitModel& model, const FeatureMatrix& data,
                                 MarginalKind kind = MarginalKind::average);
MarginalEffects marginal_effects(const LogitModel& model, const Eigen::MatrixXd& X,
                                 MarginalKind kind = MarginalKind::average);

}  // namespace veracity
