#pragma once

#include <string>
#include <vector>

#include "emsi/series.hpp"

namespace emsi {

/// Month-aligned named columns; the common container for regression inputs.
class Dataset {
 public:
  /// Intersects the ranges of the given series; errors when the
  /// intersection is empty or a name repeats.
  static Dataset align(const std::vector<std::pair<std::string, MonthlySeries>>& series);

  int rows() const { return columns_.empty() ? 0 : static_cast<int>(columns_[0].size()); }
  YearMonth start() const { return start_; }
  YearMonth month_at(int i) const { return start_.plus(i); }

  const std::vector<std::string>& names() const { return names_; }
  bool has(const std::string& name) const;
  const std::vector<double>& values(const std::string& name) const;
  double value(const std::string& name, int row) const;
  MonthlySeries series(const std::string& name) const;

  /// CSV with a leading "month" column.
  std::string to_csv() const;
  static Dataset from_csv(const std::string& content, const std::string& origin = "dataset.csv");

 private:
  int index_of(const std::string& name) const;  // throws DataError when absent

  YearMonth start_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace emsi
