#include "spdc/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "spdc/errors.hpp"

namespace spdc::csv {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

Table::Table(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) text_ += ',';
    text_ += header[j];
  }
  text_ += '\n';
}

void Table::add_row(std::initializer_list<double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void Table::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorCode::ValidationError, "CSV row width does not match header");
  }
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) text_ += ',';
    text_ += cells[j];
  }
  text_ += '\n';
  ++rows_;
}

std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(cells));
    pos = end + 1;
  }
  return out;
}

}  // namespace spdc::csv
