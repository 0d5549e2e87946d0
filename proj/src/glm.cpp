#include "veracity/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "veracity/distributions.hpp"

namespace veracity {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out.empty() ? "(intercept only)" : out;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd a(X.rows(), X.cols() + 1);
  a.col(0).setOnes();
  a.rightCols(X.cols()) = X;
  return a;
}

}  // namespace

double LogitModel::linear_predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  return intercept + x.dot(coefficients);
}

double aic(double log_likelihood, std::size_t k) {
  return -2.0 * log_likelihood + 2.0 * static_cast<double>(k + 1);
}

double aic(const LogitModel& model) { return aic(model.log_likelihood, model.k()); }

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double logit_log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta(i);
    // log(1 + exp(e)) without overflow
    const double softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    ll += y(i) * e - softplus;
  }
  return ll;
}

LogitModel fit_logit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (static_cast<Eigen::Index>(names.size()) != k) throw std::invalid_argument("fit_logit: names/columns mismatch");
  if (y.size() != n) throw std::invalid_argument("fit_logit: X and y differ in length");
  if (n <= k + 1)
    throw DegenerateDataError(fmt::format("need more than {} observations for {} variables", k + 1, k), names);
  for (Eigen::Index i = 0; i < n; ++i)
    if (y(i) != 0.0 && y(i) != 1.0) throw std::invalid_argument("fit_logit: labels must be 0/1");

  const double ybar = y.mean();
  if (ybar == 0.0 || ybar == 1.0)
    throw SeparationError("outcome is constant; the likelihood has no finite maximum", names);

  Eigen::VectorXd sd(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mean = X.col(j).mean();
    sd(j) = std::sqrt((X.col(j).array() - mean).square().sum() / static_cast<double>(n));
    if (!(sd(j) > 0.0))
      throw DegenerateDataError(fmt::format("variable '{}' has zero variance", names[static_cast<std::size_t>(j)]),
                                names);
  }

  const Eigen::MatrixXd a = with_intercept(X);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k + 1);
  beta(0) = std::log(ybar / (1.0 - ybar));
  Eigen::VectorXd eta = a * beta;
  double ll = logit_log_likelihood(eta, y);

  auto score_and_info = [&](const Eigen::VectorXd& eta_now, Eigen::VectorXd& score, Eigen::MatrixXd& info) {
    Eigen::VectorXd p = eta_now.unaryExpr([](double e) { return logistic(e); });
    Eigen::VectorXd w = p.array() * (1.0 - p.array());
    score = a.transpose() * (y - p);
    info = a.transpose() * w.asDiagonal() * a;
  };

  LogitModel model;
  model.variables = std::move(names);
  model.n_obs = static_cast<std::size_t>(n);
  model.train_base_rate = ybar;

  Eigen::VectorXd score;
  Eigen::MatrixXd info;
  int iter = 0;
  bool converged = false;
  while (iter < kMaxIrlsIterations) {
    score_and_info(eta, score, info);
    if (score.cwiseAbs().maxCoeff() < 1e-8) {
      converged = true;
      break;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success)
      throw SeparationError("information matrix became singular (fitted probabilities saturated) for " +
                                join(model.variables),
                            model.variables);
    const Eigen::VectorXd step = llt.solve(score);
    ++iter;

    double t = 1.0;
    Eigen::VectorXd candidate = beta + step;
    Eigen::VectorXd eta_new = a * candidate;
    double ll_new = logit_log_likelihood(eta_new, y);
    while (!(ll_new >= ll - 1e-12 * std::fabs(ll)) && t > 1e-10) {
      t *= 0.5;
      candidate = beta + t * step;
      eta_new = a * candidate;
      ll_new = logit_log_likelihood(eta_new, y);
    }
    const double rel_change = std::fabs(ll_new - ll) / std::max(std::fabs(ll), 1e-300);
    beta = candidate;
    eta = eta_new;
    ll = ll_new;

    const double max_std_beta =
        k > 0 ? (beta.tail(k).array() * sd.array()).abs().maxCoeff() : 0.0;
    if (max_std_beta > kSeparationThreshold && rel_change >= 1e-10)
      throw SeparationError(fmt::format("perfect separation: standardized coefficient {:.1f} still growing for {}",
                                        max_std_beta, join(model.variables)),
                            model.variables);
    if (rel_change < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError(
        fmt::format("IRLS did not converge in {} iterations for {}", kMaxIrlsIterations, join(model.variables)),
        model.variables);

  score_and_info(eta, score, info);
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success)
    throw SeparationError("information matrix singular at the optimum for " + join(model.variables),
                          model.variables);

  model.intercept = beta(0);
  model.coefficients = beta.tail(k);
  model.log_likelihood = ll;
  model.aic = aic(ll, static_cast<std::size_t>(k));
  model.covariance = llt.solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
  model.converged = true;
  model.n_iter = iter;
  return model;
}

LogitModel fit_logit(const FeatureMatrix& data, const std::vector<std::string>& variables) {
  return fit_logit(data.select(variables), data.y(), variables);
}

Eigen::VectorXd predict_proba(const LogitModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.coefficients.size()) throw std::invalid_argument("predict_proba: column count mismatch");
  if (!X.allFinite()) throw std::domain_error("predict_proba: non-finite feature value");
  Eigen::VectorXd eta = (X * model.coefficients).array() + model.intercept;
  return eta.unaryExpr([](double e) { return logistic(e); });
}

Eigen::VectorXd predict_proba(const LogitModel& model, const FeatureMatrix& data) {
  return predict_proba(model, data.select(model.variables));
}

std::vector<std::string> restrict_pool(const std::vector<AnovaRow>& anova, double alpha) {
  std::vector<const AnovaRow*> kept;
  for (const auto& row : anova)
    if (row.p_value < alpha) kept.push_back(&row);
  std::stable_sort(kept.begin(), kept.end(), [](const AnovaRow* a, const AnovaRow* b) { return a->F > b->F; });
  std::vector<std::string> out;
  for (const auto* row : kept) out.push_back(row->variable);
  return out;
}

namespace {

struct Trial {
  std::optional<LogitModel> model;
  std::string error;
};

Trial try_fit(const FeatureMatrix& data, const std::vector<std::string>& vars) {
  try {
    return {fit_logit(data, vars), {}};
  } catch (const FitError& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace

SelectionResult stepwise_forward(const FeatureMatrix& data, const std::vector<std::string>& pool,
                                 std::optional<std::string> start) {
  SelectionResult result;
  std::vector<std::string> selected;
  std::vector<std::string> remaining = pool;

  std::optional<LogitModel> first;
  if (start) {
    auto it = std::find(remaining.begin(), remaining.end(), *start);
    if (it == remaining.end()) throw std::invalid_argument("start variable '" + *start + "' is not in the pool");
    remaining.erase(it);
    selected.push_back(*start);
    first = fit_logit(data, selected);
  } else if (!pool.empty()) {
    // Highest F first; a variable that cannot be fitted on its own is skipped.
    for (const auto& var : restrict_pool(anova_table(data.subset_columns(pool)), 2.0)) {
      auto trial = try_fit(data, {var});
      if (!trial.model) {
        result.log.push_back({0, "skip", var, std::numeric_limits<double>::quiet_NaN(), false, trial.error});
        continue;
      }
      remaining.erase(std::find(remaining.begin(), remaining.end(), var));
      selected.push_back(var);
      first = std::move(trial.model);
      break;
    }
  }

  LogitModel current = first ? std::move(*first) : fit_logit(data, selected);
  result.log.push_back({0, "start", selected.empty() ? "" : selected[0], current.aic, true, ""});

  for (int round = 1; !remaining.empty(); ++round) {
    std::optional<std::size_t> best;
    std::optional<LogitModel> best_model;
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      auto vars = selected;
      vars.push_back(remaining[c]);
      auto trial = try_fit(data, vars);
      if (!trial.model) {
        result.log.push_back({round, "skip", remaining[c], std::numeric_limits<double>::quiet_NaN(), false, trial.error});
        continue;
      }
      result.log.push_back({round, "add", remaining[c], trial.model->aic, false, ""});
      if (!best_model || trial.model->aic < best_model->aic) {
        best = c;
        best_model = std::move(trial.model);
      }
    }
    if (!best_model || !(best_model->aic < current.aic)) {
      result.log.push_back({round, "stop", "", current.aic, false, "no addition lowers AIC"});
      break;
    }
    for (auto& rec : result.log)
      if (rec.round == round && rec.action == "add" && rec.variable == remaining[*best]) rec.accepted = true;
    selected.push_back(remaining[*best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*best));
    current = std::move(*best_model);
  }

  current.method = "forward";
  result.model = std::move(current);
  return result;
}

SelectionResult stepwise_backward(const FeatureMatrix& data, const std::vector<std::string>& pool) {
  SelectionResult result;
  std::vector<std::string> selected = pool;
  LogitModel current = fit_logit(data, selected);
  result.log.push_back({0, "start", "", current.aic, true, fmt::format("{} variables", selected.size())});

  for (int round = 1; !selected.empty(); ++round) {
    std::optional<std::size_t> best;
    std::optional<LogitModel> best_model;
    for (std::size_t c = 0; c < selected.size(); ++c) {
      auto vars = selected;
      vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(c));
      auto trial = try_fit(data, vars);
      if (!trial.model) {
        result.log.push_back({round, "skip", selected[c], std::numeric_limits<double>::quiet_NaN(), false, trial.error});
        continue;
      }
      result.log.push_back({round, "remove", selected[c], trial.model->aic, false, ""});
      if (!best_model || trial.model->aic < best_model->aic) {
        best = c;
        best_model = std::move(trial.model);
      }
    }
    if (!best_model || !(best_model->aic < current.aic)) {
      result.log.push_back({round, "stop", "", current.aic, false, "no removal lowers AIC"});
      break;
    }
    for (auto& rec : result.log)
      if (rec.round == round && rec.action == "remove" && rec.variable == selected[*best]) rec.accepted = true;
    selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(*best));
    current = std::move(*best_model);
  }

  current.method = "backward";
  result.model = std::move(current);
  return result;
}

MarginalEffects marginal_effects(const LogitModel& model, const Eigen::MatrixXd& X, MarginalKind kind) {
  if (!model.converged) throw std::invalid_argument("marginal effects need a converged model");
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (k != model.coefficients.size()) throw std::invalid_argument("marginal_effects: column count mismatch");

  MarginalEffects out;
  out.kind = kind;
  // effect_j = beta_j * mean(p (1 - p)) over the sample (average) or at the
  // mean row; gradients are taken w.r.t. (intercept, slopes).
  Eigen::VectorXd density_grad = Eigen::VectorXd::Zero(k + 1);  // d mean(p(1-p)) / d beta
  double density = 0.0;
  if (kind == MarginalKind::average) {
    const Eigen::VectorXd p = predict_proba(model, X);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = p(i) * (1.0 - p(i));
      const double dw = w * (1.0 - 2.0 * p(i));
      density += w;
      density_grad(0) += dw;
      density_grad.tail(k) += dw * X.row(i).transpose();
    }
    density /= static_cast<double>(n);
    density_grad /= static_cast<double>(n);
  } else {
    const Eigen::RowVectorXd xbar = X.colwise().mean();
    const double p = logistic(model.linear_predictor(xbar));
    density = p * (1.0 - p);
    const double dw = density * (1.0 - 2.0 * p);
    density_grad(0) = dw;
    density_grad.tail(k) = dw * xbar.transpose();
  }

  for (Eigen::Index j = 0; j < k; ++j) {
    MarginalEffect me;
    me.variable = model.variables[static_cast<std::size_t>(j)];
    const double b = model.coefficients(j);
    me.effect = b * density;
    Eigen::VectorXd grad = b * density_grad;
    grad(j + 1) += density;
    me.std_error = std::sqrt(std::max(0.0, grad.dot(model.covariance * grad)));
    me.z = me.std_error > 0 ? me.effect / me.std_error : 0.0;
    me.p_value = me.std_error > 0 ? normal_two_sided_p(me.z) : 1.0;
    out.rows.push_back(std::move(me));
  }
  return out;
}

MarginalEffects marginal_effects(const LogitModel& model, const FeatureMatrix& data, MarginalKind kind) {
  return marginal_effects(model, data.select(model.variables), kind);
}

}  // namespace veracity
