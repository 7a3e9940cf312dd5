#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace spdc::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Builds CSV text: header row first, LF line endings, no quoting needed for
/// the numeric tables emitted here (text cells must not contain commas).
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<std::string>& cells);

  std::size_t rows() const noexcept { return rows_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Splits CSV text produced by Table back into cells (tests and tooling).
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace spdc::csv
