#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emsi {

/// Parsed CSV file: leading '#' metadata lines, a header row, data rows.
struct CsvTable {
  std::vector<std::string> meta;  // raw '#' lines, stripped of "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;           // -1 when absent
  int require_column(const std::string& name) const;   // throws DataError
};

/// RFC-4180 parser. Quoted fields may contain commas, quotes ("" escape)
/// and line breaks. Lines starting with '#' before the header are metadata.
CsvTable parse_csv(const std::string& content, const std::string& origin = "csv");

std::string csv_escape(const std::string& field);

/// Writer that accumulates into a string so callers control file I/O and
/// outputs stay byte-stable.
class CsvWriter {
 public:
  void meta(const std::string& key, const std::string& value);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  bool header_written_ = false;
};

}  // namespace emsi
