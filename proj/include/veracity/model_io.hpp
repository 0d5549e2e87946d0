#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "veracity/corpus.hpp"
#include "veracity/glm.hpp"

namespace veracity {

// JSON model file: variables, coefficients, intercept, log_likelihood, aic,
// train_base_rate, covariance, dictionary_fingerprint, seed and fit metadata.
// Doubles are written with round-trip precision.
void write_model(std::ostream& out, const LogitModel& model);
LogitModel read_model(std::istream& in);
void save_model(const std::string& path, const LogitModel& model);
LogitModel load_model(const std::string& path);

// round,action,variable,aic,accepted,note
void write_selection_log(std::ostream& out, const std::vector<StepRecord>& log);
// lambda,n_nonzero,cv_mean,cv_se,converged,selected
void write_lasso_log(std::ostream& out, const LassoPath& path);

void write_screening_report(std::ostream& out, const ScreeningReport& report,
                            std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace veracity
