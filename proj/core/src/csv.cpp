#include "remotetrack/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace remotetrack {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), end);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column named " + std::string(name));
  return static_cast<std::size_t>(it - header.begin());
}

void ResultTable::write_csv(std::ostream& out) const {
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(cells[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

void ResultTable::write_pretty(std::ostream& out, const std::vector<std::string>& skip) const {
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (std::find(skip.begin(), skip.end(), header[c]) == skip.end()) keep.push_back(c);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c : keep) {
    width[c] = header[c].size();
    for (const auto& row : rows) {
      if (c < row.size()) width[c] = std::max(width[c], row[c].size());
    }
  }
  auto print = [&](const std::vector<std::string>& cells) {
    bool first = true;
    for (std::size_t c : keep) {
      if (!first) out << "  ";
      first = false;
      const std::string& s = c < cells.size() ? cells[c] : std::string();
      out << s << std::string(width[c] - s.size(), ' ');
    }
    out << '\n';
  };
  print(header);
  for (const auto& row : rows) print(row);
}

}  // namespace remotetrack
