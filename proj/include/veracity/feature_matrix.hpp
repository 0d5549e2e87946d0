#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace veracity {

// One row per post, named columns, aligned 0/1 labels (1 = incorrect).
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;
  std::vector<int> labels;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  // Throws std::out_of_range naming the column.
  std::size_t column_index(std::string_view name) const;
  bool has_column(std::string_view name) const;

  Eigen::MatrixXd select(const std::vector<std::string>& names) const;
  FeatureMatrix subset_rows(const std::vector<std::size_t>& rows) const;
  FeatureMatrix subset_columns(const std::vector<std::string>& names) const;
  Eigen::VectorXd y() const;

  // Throws std::logic_error when shapes disagree.
  void check_shape() const;
};

// CSV: header "id,<columns...>,label", one row per post. Labels are written
// as 0/1 and read as 0/1 or correct/incorrect.
FeatureMatrix read_feature_csv(std::istream& in);
FeatureMatrix load_feature_csv(const std::string& path);
void write_feature_csv(std::ostream& out, const FeatureMatrix& m);

}  // namespace veracity
