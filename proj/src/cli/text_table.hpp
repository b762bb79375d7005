#pragma once

#include <string>
#include <vector>

namespace specrev::cli {

/// Column-aligned plain-text table; numeric-looking cells are right-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Fixed-point text with `digits` decimals, "-0.000" folded to "0.000".
std::string fixed(double value, int digits);

}  // namespace specrev::cli
