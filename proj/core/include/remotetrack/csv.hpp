#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace remotetrack {

/// Shortest decimal that round-trips to the same double ('.' separator,
/// locale independent). NaN and infinities print as nan / inf / -inf.
std::string format_double(double value);

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// Header plus string rows, written as RFC 4180-style CSV with '\n' endings.
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  /// Column-aligned text for terminals; columns listed in `skip` are omitted.
  void write_pretty(std::ostream& out, const std::vector<std::string>& skip = {}) const;
};

}  // namespace remotetrack
