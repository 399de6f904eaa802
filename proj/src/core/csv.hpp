#ifndef SCC_CSV_HPP
#define SCC_CSV_HPP

#include <optional>
#include <string>
#include <vector>

namespace scc {

// Calendar date handled as a serial day count so gap checks are O(1).
struct Date {
  int serial = 0;  // days since 1970-01-01

  static Date parse(const std::string& iso);  // "YYYY-MM-DD"
  static Date from_ymd(int y, int m, int d);
  std::string iso() const;
  auto operator<=>(const Date&) const = default;
};

namespace csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // leading '#'-prefixed lines (config echoes in our own outputs)
  std::vector<std::string> comments;

  int column(const std::string& name) const;  // -1 if absent
};

Table read_file(const std::string& path);
Table parse(const std::string& text, const std::string& origin);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace csv

}  // namespace scc

#endif
