#include "veracity/model_io.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "json.hpp"
#include "veracity/csv.hpp"

namespace veracity {

using nlohmann::ordered_json;

void write_model(std::ostream& out, const LogitModel& model) {
  ordered_json j;
  j["format"] = "veracity-logit/1";
  j["method"] = model.method;
  j["variables"] = model.variables;
  j["intercept"] = model.intercept;
  j["coefficients"] = std::vector<double>(model.coefficients.data(), model.coefficients.data() + model.coefficients.size());
  j["log_likelihood"] = model.log_likelihood;
  j["aic"] = model.aic;
  j["train_base_rate"] = model.train_base_rate;
  j["n_obs"] = model.n_obs;
  j["converged"] = model.converged;
  j["n_iter"] = model.n_iter;
  j["dictionary_fingerprint"] = model.dictionary_fingerprint;
  j["seed"] = model.seed ? ordered_json(*model.seed) : ordered_json(nullptr);
  j["lambda"] = model.lambda ? ordered_json(*model.lambda) : ordered_json(nullptr);
  auto cov = ordered_json::array();
  for (Eigen::Index r = 0; r < model.covariance.rows(); ++r) {
    auto row = ordered_json::array();
    for (Eigen::Index c = 0; c < model.covariance.cols(); ++c) row.push_back(model.covariance(r, c));
    cov.push_back(row);
  }
  j["covariance"] = cov;
  out << j.dump(2) << '\n';
}

LogitModel read_model(std::istream& in) {
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  LogitModel m;
  try {
    m.method = j.value("method", "");
    m.variables = j.at("variables").get<std::vector<std::string>>();
    m.intercept = j.at("intercept").get<double>();
    auto coefs = j.at("coefficients").get<std::vector<double>>();
    if (coefs.size() != m.variables.size()) throw InputError("model file: coefficient count mismatch");
    m.coefficients = Eigen::Map<Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
    m.log_likelihood = j.at("log_likelihood").get<double>();
    m.aic = j.at("aic").get<double>();
    m.train_base_rate = j.at("train_base_rate").get<double>();
    m.n_obs = j.value("n_obs", std::size_t{0});
    m.converged = j.value("converged", true);
    m.n_iter = j.value("n_iter", 0);
    m.dictionary_fingerprint = j.value("dictionary_fingerprint", "");
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lambda") && !j["lambda"].is_null()) m.lambda = j["lambda"].get<double>();
    const auto k1 = static_cast<Eigen::Index>(m.variables.size() + 1);
    m.covariance = Eigen::MatrixXd::Zero(k1, k1);
    if (j.contains("covariance")) {
      const auto& cov = j["covariance"];
      if (static_cast<Eigen::Index>(cov.size()) != k1) throw InputError("model file: covariance has wrong shape");
      for (Eigen::Index r = 0; r < k1; ++r) {
        if (static_cast<Eigen::Index>(cov[static_cast<std::size_t>(r)].size()) != k1)
          throw InputError("model file: covariance has wrong shape");
        for (Eigen::Index c = 0; c < k1; ++c)
          m.covariance(r, c) = cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
      }
    }
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
  return m;
}

void save_model(const std::string& path, const LogitModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  write_model(out, model);
}

LogitModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file " + path);
  return read_model(in);
}

void write_selection_log(std::ostream& out, const std::vector<StepRecord>& log) {
  csv::write_row(out, {"round", "action", "variable", "aic", "accepted", "note"});
  for (const auto& r : log)
    csv::write_row(out, {std::to_string(r.round), r.action, r.variable,
                         std::isnan(r.aic) ? "" : fmt::format("{}", r.aic), r.accepted ? "1" : "0", r.note});
}

void write_lasso_log(std::ostream& out, const LassoPath& path) {
  csv::write_row(out, {"lambda", "n_nonzero", "cv_mean", "cv_se", "converged", "selected"});
  for (std::size_t l = 0; l < path.lambdas.size(); ++l) {
    csv::write_row(out, {fmt::format("{}", path.lambdas[l]), std::to_string(path.support(l).size()),
                         l < path.cv_mean.size() ? fmt::format("{}", path.cv_mean[l]) : "",
                         l < path.cv_se.size() ? fmt::format("{}", path.cv_se[l]) : "",
                         path.converged[l] ? "1" : "0", path.selected == l ? "1" : "0"});
  }
}

void write_screening_report(std::ostream& out, const ScreeningReport& r, std::optional<std::uint64_t> seed) {
  ordered_json j;
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  j["input"] = r.input;
  j["removed_retweets"] = r.removed_retweets;
  j["removed_quotes"] = r.removed_quotes;
  j["removed_duplicates"] = r.removed_duplicates;
  j["removed_link_only"] = r.removed_link_only;
  j["removed_other"] = r.removed_other;
  j["merged_absorbed"] = r.merged_absorbed;
  j["retained"] = r.retained;
  auto removals = ordered_json::array();
  for (const auto& [id, reason] : r.removals) removals.push_back({{"id", id}, {"reason", reason}});
  j["removals"] = removals;
  j["merge_notes"] = r.merge_notes;
  out << j.dump(2) << '\n';
}

}  // namespace veracity
