#include "emsi/csv.hpp"

#include <algorithm>

#include "emsi/error.hpp"
#include "emsi/util.hpp"

namespace emsi {

int CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int CsvTable::require_column(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw DataError("missing column '" + name + "'");
  return c;
}

CsvTable parse_csv(const std::string& content, const std::string& origin) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_started = false;
  bool header_done = false;

  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
  };
  auto end_record = [&]() {
    end_field();
    if (!header_done) {
      // Metadata lines keep their position before the header row.
      if (record.size() == 1 && starts_with(record[0], "#")) {
        std::string m = record[0].substr(1);
        if (!m.empty() && m[0] == ' ') m.erase(0, 1);
        table.meta.push_back(m);
      } else {
        table.header = record;
        header_done = true;
      }
    } else {
      table.rows.push_back(record);
    }
    record.clear();
    record_started = false;
  };

  for (size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw DataError(origin + ": stray quote at byte " + std::to_string(i));
        in_quotes = true;
        record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        break;  // tolerate CRLF input
      case '\n':
        if (record_started || !field.empty() || !record.empty()) end_record();
        break;
      default:
        field += c;
        record_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError(origin + ": unterminated quoted field");
  if (record_started || !field.empty() || !record.empty()) end_record();

  if (header_done) {
    for (size_t r = 0; r < table.rows.size(); ++r) {
      if (table.rows[r].size() != table.header.size()) {
        throw DataError(origin + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(table.rows[r].size()) + " fields, expected " +
                        std::to_string(table.header.size()));
      }
    }
  }
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  out_ += "# " + key + ": " + value + "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    out_ += csv_escape(fields[i]);
  }
  out_ += '\n';
  header_written_ = true;
}

}  // namespace emsi
