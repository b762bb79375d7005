#include "text_table.hpp"

#include <algorithm>
#include <cstdio>

namespace specrev::cli {
namespace {

bool numeric(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == '%';
  });
}

}  // namespace

std::string TextTable::render() const {
  std::vector<std::size_t> width(header_.size(), 0);
  for (std::size_t j = 0; j < header_.size(); ++j) width[j] = header_[j].size();
  for (const auto& r : rows_)
    for (std::size_t j = 0; j < r.size() && j < width.size(); ++j) width[j] = std::max(width[j], r[j].size());

  auto line = [&](const std::vector<std::string>& cells, bool head) {
    std::string out;
    for (std::size_t j = 0; j < width.size(); ++j) {
      const std::string c = j < cells.size() ? cells[j] : "";
      const std::string pad(width[j] - c.size(), ' ');
      if (j) out += "  ";
      out += (!head && numeric(c)) ? pad + c : c + pad;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header_, true);
  std::size_t total = 0;
  for (std::size_t j = 0; j < width.size(); ++j) total += width[j] + (j ? 2 : 0);
  out += std::string(total, '-') + "\n";
  for (const auto& r : rows_) out += line(r, false);
  return out;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace specrev::cli
