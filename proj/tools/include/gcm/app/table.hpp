#pragma once

// Flat CSV tables: header row, '\n' line ends, no trailing delimiter.
// Numbers use the shortest decimal that round-trips.

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gcm::app {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double v);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::string to_csv() const;
  /// Index of a header column; throws CsvError when absent.
  std::size_t column(const std::string& name) const;
  /// Numeric value of a cell; throws CsvError for text cells.
  double number(std::size_t row, std::size_t col) const;
};

/// Parses CSV produced by to_csv(). Numeric-looking fields become doubles,
/// everything else stays text. Throws CsvError on ragged or empty input.
Table parse_csv(const std::string& text);

}  // namespace gcm::app
