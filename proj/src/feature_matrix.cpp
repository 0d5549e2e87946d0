#include "veracity/feature_matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "veracity/corpus.hpp"
#include "veracity/csv.hpp"

namespace veracity {

std::size_t FeatureMatrix::column_index(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return j;
  throw std::out_of_range(fmt::format("no feature column named '{}'", name));
}

bool FeatureMatrix::has_column(std::string_view name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

Eigen::MatrixXd FeatureMatrix::select(const std::vector<std::string>& names) const {
  Eigen::MatrixXd out(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t k = 0; k < names.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = values.col(static_cast<Eigen::Index>(column_index(names[k])));
  return out;
}

FeatureMatrix FeatureMatrix::subset_rows(const std::vector<std::size_t>& rows) const {
  FeatureMatrix out;
  out.columns = columns;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.values.row(static_cast<Eigen::Index>(k)) = values.row(static_cast<Eigen::Index>(rows[k]));
    out.ids.push_back(ids[rows[k]]);
    out.labels.push_back(labels[rows[k]]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::subset_columns(const std::vector<std::string>& names) const {
  FeatureMatrix out;
  out.ids = ids;
  out.labels = labels;
  out.columns = names;
  out.values = select(names);
  return out;
}

Eigen::VectorXd FeatureMatrix::y() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) out(static_cast<Eigen::Index>(i)) = labels[i];
  return out;
}

void FeatureMatrix::check_shape() const {
  if (static_cast<std::size_t>(values.rows()) != labels.size() || ids.size() != labels.size() ||
      static_cast<std::size_t>(values.cols()) != columns.size())
    throw std::logic_error("feature matrix shape mismatch");
}

FeatureMatrix read_feature_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) throw csv::ParseError(1, "empty feature file");
  if (header.size() < 2 || header.front() != "id" || header.back() != "label")
    throw csv::ParseError(1, "feature header must start with 'id' and end with 'label'");

  FeatureMatrix m;
  m.columns.assign(header.begin() + 1, header.end() - 1);
  const std::size_t width = header.size();
  std::vector<double> flat;
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != width)
      throw csv::ParseError(reader.row_number(), fmt::format("expected {} fields, found {}", width, row.size()));
    m.ids.push_back(row.front());
    for (std::size_t j = 1; j + 1 < width; ++j) {
      const auto& s = row[j];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw csv::ParseError(reader.row_number(), fmt::format("bad value '{}' in column '{}'", s, header[j]));
      flat.push_back(v);
    }
    auto label = parse_veracity(row.back());
    if (!label) throw csv::ParseError(reader.row_number(), fmt::format("bad label '{}'", row.back()));
    m.labels.push_back(*label == Veracity::incorrect ? 1 : 0);
  }
  const auto n = static_cast<Eigen::Index>(m.ids.size());
  const auto p = static_cast<Eigen::Index>(m.columns.size());
  m.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), n, p);
  return m;
}

FeatureMatrix load_feature_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open feature file " + path);
  return read_feature_csv(in);
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& m) {
  csv::Row header{"id"};
  header.insert(header.end(), m.columns.begin(), m.columns.end());
  header.push_back("label");
  csv::write_row(out, header);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    csv::Row row{m.ids[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(fmt::format("{}", m.values(i, j)));
    row.push_back(std::to_string(m.labels[static_cast<std::size_t>(i)]));
    csv::write_row(out, row);
  }
}

}  // namespace veracity
