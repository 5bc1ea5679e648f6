#include "emsi/dataset.hpp"

#include <algorithm>
#include <cstdlib>

#include "emsi/csv.hpp"
#include "emsi/error.hpp"
#include "emsi/util.hpp"

namespace emsi {

Dataset Dataset::align(const std::vector<std::pair<std::string, MonthlySeries>>& series) {
  if (series.empty()) throw DataError("dataset: no series to align");
  int lo = series[0].second.start.index();
  int hi = series[0].second.last_month().index();
  for (const auto& [name, s] : series) {
    if (s.empty()) throw DataError("dataset: series '" + name + "' is empty");
    lo = std::max(lo, s.start.index());
    hi = std::min(hi, s.last_month().index());
  }
  if (hi < lo) throw DataError("dataset: series ranges do not overlap");

  Dataset out;
  out.start_ = YearMonth::from_index(lo);
  const int n = hi - lo + 1;
  for (const auto& [name, s] : series) {
    if (std::find(out.names_.begin(), out.names_.end(), name) != out.names_.end()) {
      throw DataError("dataset: duplicate series name '" + name + "'");
    }
    out.names_.push_back(name);
    const int off = lo - s.start.index();
    out.columns_.emplace_back(s.values.begin() + off, s.values.begin() + off + n);
  }
  return out;
}

int Dataset::index_of(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  throw DataError("dataset: unknown series '" + name + "'");
}

bool Dataset::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Dataset::values(const std::string& name) const {
  return columns_[static_cast<size_t>(index_of(name))];
}

double Dataset::value(const std::string& name, int row) const {
  return values(name)[static_cast<size_t>(row)];
}

MonthlySeries Dataset::series(const std::string& name) const {
  return {start_, values(name), ""};
}

std::string Dataset::to_csv() const {
  CsvWriter w;
  std::vector<std::string> header = {"month"};
  header.insert(header.end(), names_.begin(), names_.end());
  w.row(header);
  for (int r = 0; r < rows(); ++r) {
    std::vector<std::string> row = {month_at(r).str()};
    for (const auto& col : columns_) row.push_back(fmt_double(col[static_cast<size_t>(r)]));
    w.row(row);
  }
  return w.str();
}

Dataset Dataset::from_csv(const std::string& content, const std::string& origin) {
  const CsvTable table = parse_csv(content, origin);
  const int c_month = table.require_column("month");
  Dataset out;
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (static_cast<int>(c) == c_month) continue;
    out.names_.push_back(table.header[c]);
    out.columns_.emplace_back();
  }
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const YearMonth m = YearMonth::parse(table.rows[r][static_cast<size_t>(c_month)]);
    if (r == 0) {
      out.start_ = m;
    } else if (m.index() != out.start_.index() + static_cast<int>(r)) {
      throw DataError(origin + ": months not contiguous at " + m.str());
    }
    size_t k = 0;
    for (size_t c = 0; c < table.header.size(); ++c) {
      if (static_cast<int>(c) == c_month) continue;
      char* end = nullptr;
      const std::string& cell = table.rows[r][c];
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw DataError(origin + ": bad numeric value '" + cell + "'");
      }
      out.columns_[k++].push_back(v);
    }
  }
  return out;
}

}  // namespace emsi
