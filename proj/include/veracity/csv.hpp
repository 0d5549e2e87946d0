#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace veracity::csv {

struct ParseError : std::runtime_error {
  ParseError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row(row) {}
  std::size_t row;
};

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Row numbers are 1-based and count physical records, header included.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(Row& row);
  std::size_t row_number() const { return row_; }

 private:
  std::istream& in_;
  std::size_t row_ = 0;
};

std::vector<Row> read_all(std::istream& in);
std::vector<Row> read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

// Index of a header column, or -1.
int column_index(const Row& header, std::string_view name);

}  // namespace veracity::csv
