#include "veracity/stats.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "veracity/distributions.hpp"

namespace veracity {

namespace {

struct GroupSplit {
  std::vector<Eigen::Index> correct;
  std::vector<Eigen::Index> incorrect;
};

GroupSplit split_groups(const FeatureMatrix& m) {
  m.check_shape();
  GroupSplit g;
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    (m.labels[i] ? g.incorrect : g.correct).push_back(static_cast<Eigen::Index>(i));
  if (g.correct.empty() || g.incorrect.empty())
    throw std::invalid_argument("both veracity groups must be non-empty");
  return g;
}

Eigen::RowVectorXd group_mean(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(x.cols());
  for (auto r : rows) sum += x.row(r);
  return sum / static_cast<double>(rows.size());
}

}  // namespace

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string AnovaRow::stars() const { return significance_stars(p_value); }

std::vector<AnovaRow> anova_table(const FeatureMatrix& m) {
  const auto g = split_groups(m);
  const auto n = static_cast<double>(m.rows());
  if (m.rows() <= 2) throw std::invalid_argument("ANOVA needs more than two observations");

  const Eigen::RowVectorXd mean0 = group_mean(m.values, g.correct);
  const Eigen::RowVectorXd mean1 = group_mean(m.values, g.incorrect);
  const Eigen::RowVectorXd grand = m.values.colwise().mean();
  const double n0 = static_cast<double>(g.correct.size());
  const double n1 = static_cast<double>(g.incorrect.size());

  std::vector<AnovaRow> rows;
  rows.reserve(m.columns.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    AnovaRow row;
    row.variable = m.columns[static_cast<std::size_t>(j)];
    row.mean_correct = mean0(j);
    row.mean_incorrect = mean1(j);

    const double ss_between =
        n0 * std::pow(mean0(j) - grand(j), 2) + n1 * std::pow(mean1(j) - grand(j), 2);
    double ss_within = 0.0;
    for (auto r : g.correct) ss_within += std::pow(m.values(r, j) - mean0(j), 2);
    for (auto r : g.incorrect) ss_within += std::pow(m.values(r, j) - mean1(j), 2);

    // Differences below rounding noise of the column scale count as zero.
    const double scale = m.values.col(j).cwiseAbs().maxCoeff();
    const double noise = n * std::pow(std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300), 2) * 64;
    if (ss_within <= noise) {
      if (ss_between <= noise) {
        row.F = 0.0;
        row.p_value = 1.0;
        row.degenerate = true;
      } else {
        row.F = std::numeric_limits<double>::infinity();
        row.p_value = 0.0;
        row.degenerate = true;
      }
    } else {
      row.F = ss_between / (ss_within / (n - 2.0));
      row.p_value = f_sf(row.F, 1.0, n - 2.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ManovaReport manova_pillai(const FeatureMatrix& m) {
  const auto g = split_groups(m);
  const Eigen::Index n = m.rows();
  const Eigen::Index p = m.cols();
  if (p < 1) throw std::invalid_argument("MANOVA needs at least one variable");
  if (n - p - 1 < 1)
    throw std::invalid_argument(fmt::format("MANOVA needs N - p - 1 >= 1 (N = {}, p = {})", n, p));

  const Eigen::RowVectorXd grand = m.values.colwise().mean();
  const Eigen::MatrixXd centered = m.values.rowwise() - grand;
  const Eigen::MatrixXd total = centered.transpose() * centered;  // H + E

  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(p, p);
  for (const auto* rows : {&g.correct, &g.incorrect}) {
    const Eigen::VectorXd d = (group_mean(m.values, *rows) - grand).transpose();
    between += static_cast<double>(rows->size()) * d * d.transpose();
  }

  // Sequential Cholesky: a pivot that vanishes relative to its diagonal marks
  // a column in the span of the earlier ones.
  std::vector<std::string> dependent;
  {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double diag = total(j, j);
      Eigen::VectorXd row(static_cast<Eigen::Index>(kept.size()));
      for (std::size_t a = 0; a < kept.size(); ++a) {
        double s = total(j, kept[a]);
        for (std::size_t b = 0; b < a; ++b) s -= row(static_cast<Eigen::Index>(b)) * l(kept[a], static_cast<Eigen::Index>(b));
        row(static_cast<Eigen::Index>(a)) = s / l(kept[a], static_cast<Eigen::Index>(a));
      }
      const double pivot = diag - row.squaredNorm();
      if (!(diag > 0.0) || pivot <= 1e-10 * diag) {
        dependent.push_back(m.columns[static_cast<std::size_t>(j)]);
        continue;
      }
      for (std::size_t a = 0; a < kept.size(); ++a) l(j, static_cast<Eigen::Index>(a)) = row(static_cast<Eigen::Index>(a));
      l(j, static_cast<Eigen::Index>(kept.size())) = std::sqrt(pivot);
      kept.push_back(j);
    }
  }
  if (!dependent.empty()) {
    std::string names;
    for (const auto& d : dependent) names += (names.empty() ? "" : ", ") + d;
    throw CollinearityError("H + E is singular; dependent columns: " + names, dependent);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(total);
  if (llt.info() != Eigen::Success) throw CollinearityError("H + E is not positive definite", {});

  ManovaReport report;
  report.pillai = llt.solve(between).trace();
  report.df1 = static_cast<double>(p);
  report.df2 = static_cast<double>(n - p - 1);
  report.F = report.pillai < 1.0 ? (report.df2 / report.df1) * report.pillai / (1.0 - report.pillai)
                                 : std::numeric_limits<double>::infinity();
  report.p_value = f_sf(report.F, report.df1, report.df2);
  report.eta_p_sq = report.pillai;

  report.univariate = anova_table(m);
  for (const auto& row : report.univariate) {
    report.n_significant_05 += row.p_value < 0.05;
    report.n_significant_01 += row.p_value < 0.01;
    report.n_significant_001 += row.p_value < 0.001;
  }
  return report;
}

}  // namespace veracity
