#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace helmkit {

/// RFC 4180 table: CRLF line ends, fields quoted when they contain a comma,
/// quote, CR or LF. Doubles print with %.17g so values survive a round trip.
class CsvTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const;
  void write(const std::string& path) const;

  static std::string escape(const std::string& field);
  static std::string format(const Cell& cell);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Parses RFC 4180 text back into string fields (used by tests and tools).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(const std::string& bytes);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace helmkit
