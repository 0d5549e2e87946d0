#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "veracity/feature_matrix.hpp"

namespace veracity {

struct AnovaRow {
  std::string variable;
  double mean_correct = 0.0;
  double mean_incorrect = 0.0;
  double F = 0.0;  // df (1, N - 2)
  double p_value = 1.0;
  // Zero within-group and zero between-group variation: F = 0, p = 1.
  bool degenerate = false;

  std::string stars() const;
};

std::string significance_stars(double p);

// One-way two-group ANOVA per column, in column order.
// Throws std::invalid_argument if a group is empty or N <= 2.
std::vector<AnovaRow> anova_table(const FeatureMatrix& m);

struct CollinearityError : std::runtime_error {
  CollinearityError(const std::string& what, std::vector<std::string> dependent)
      : std::runtime_error(what), dependent_columns(std::move(dependent)) {}
  std::vector<std::string> dependent_columns;
};

struct ManovaReport {
  double pillai = 0.0;  // V
  double F = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
  double eta_p_sq = 0.0;  // equals V for two groups
  int n_significant_05 = 0;
  int n_significant_01 = 0;
  int n_significant_001 = 0;
  std::vector<AnovaRow> univariate;
};

// Two-group MANOVA with Pillai's trace V = tr(H (H + E)^-1).
// Throws CollinearityError when H + E is singular, std::invalid_argument when
// N - p - 1 < 1 or a group is empty.
ManovaReport manova_pillai(const FeatureMatrix& m);

}  // namespace veracity
