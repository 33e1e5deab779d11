#include "gcm/app/table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace gcm::app {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header.size()) throw CsvError("row width does not match header");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  auto put_text = [&](const std::string& s) {
    if (s.find_first_of(",\"\n") != std::string::npos) throw CsvError("field needs quoting: " + s);
    out += s;
  };
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    put_text(header[i]);
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_number(*d);
      } else if (const auto* n = std::get_if<long long>(&row[i])) {
        out += std::to_string(*n);
      } else {
        put_text(std::get<std::string>(row[i]));
      }
    }
    out += '\n';
  }
  return out;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw CsvError("no column \"" + name + "\"");
}

double Table::number(std::size_t row, std::size_t col) const {
  const Cell& c = rows.at(row).at(col);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* n = std::get_if<long long>(&c)) return static_cast<double>(*n);
  throw CsvError("non-numeric value in column " + header.at(col));
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto parts = split(line);
    if (t.header.empty()) {
      t.header = std::move(parts);
      continue;
    }
    if (parts.size() != t.header.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                     " fields, got " + std::to_string(parts.size()));
    }
    std::vector<Cell> row;
    for (const auto& p : parts) {
      double v = 0.0;
      const auto res = std::from_chars(p.data(), p.data() + p.size(), v);
      if (!p.empty() && res.ec == std::errc() && res.ptr == p.data() + p.size()) {
        row.emplace_back(v);
      } else {
        row.emplace_back(p);
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw CsvError("empty CSV");
  return t;
}

}  // namespace gcm::app
