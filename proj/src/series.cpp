#include "emsi/series.hpp"

#include <cmath>
#include <cstdlib>

#include "emsi/csv.hpp"
#include "emsi/error.hpp"
#include "emsi/util.hpp"

namespace emsi {

namespace {

double parse_number(const std::string& s, const std::string& origin) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || std::isnan(v)) {
    throw DataError(origin + ": bad numeric value '" + s + "'");
  }
  return v;
}

}  // namespace

std::optional<int> MonthlySeries::offset(YearMonth m) const {
  const int off = m.index() - start.index();
  if (off < 0 || off >= size()) return std::nullopt;
  return off;
}

double MonthlySeries::at(YearMonth m) const {
  const auto off = offset(m);
  if (!off) throw DataError("month " + m.str() + " outside series range");
  return values[static_cast<size_t>(*off)];
}

std::string MonthlySeries::to_csv() const {
  CsvWriter w;
  w.row({"period", "value"});
  for (int i = 0; i < size(); ++i) {
    w.row({month_at(i).str(), fmt_double(values[static_cast<size_t>(i)])});
  }
  return w.str();
}

MonthlySeries MonthlySeries::from_csv(const std::string& content, const std::string& origin) {
  const CsvTable table = parse_csv(content, origin);
  const int c_period = table.require_column("period");
  const int c_value = table.require_column("value");
  MonthlySeries out;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const YearMonth m = YearMonth::parse(table.rows[r][static_cast<size_t>(c_period)]);
    if (r == 0) {
      out.start = m;
    } else if (m.index() != out.start.index() + static_cast<int>(r)) {
      throw DataError(origin + ": months not contiguous at " + m.str());
    }
    out.values.push_back(parse_number(table.rows[r][static_cast<size_t>(c_value)], origin));
  }
  return out;
}

QuarterlySeries QuarterlySeries::from_csv(const std::string& content, const std::string& origin) {
  const CsvTable table = parse_csv(content, origin);
  const int c_period = table.require_column("period");
  const int c_value = table.require_column("value");
  QuarterlySeries out;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const Quarter q = Quarter::parse(table.rows[r][static_cast<size_t>(c_period)]);
    if (r == 0) {
      out.start = q;
    } else if (q.index() != out.start.index() + static_cast<int>(r)) {
      throw DataError(origin + ": quarters not contiguous at " + q.str());
    }
    out.values.push_back(parse_number(table.rows[r][static_cast<size_t>(c_value)], origin));
  }
  return out;
}

std::vector<SurveyWave> waves_from_csv(const std::string& content, const std::string& origin) {
  const CsvTable table = parse_csv(content, origin);
  const int c_month = table.require_column("month");
  const int c[6] = {table.require_column("a1"), table.require_column("a2"),
                    table.require_column("a3"), table.require_column("a4"),
                    table.require_column("a5"), table.require_column("a6")};
  const int c_total = table.require_column("total");
  std::vector<SurveyWave> waves;
  for (const auto& row : table.rows) {
    SurveyWave w;
    w.month = YearMonth::parse(row[static_cast<size_t>(c_month)]);
    int* fields[6] = {&w.a1, &w.a2, &w.a3, &w.a4, &w.a5, &w.a6};
    for (int i = 0; i < 6; ++i) {
      *fields[i] = static_cast<int>(parse_number(row[static_cast<size_t>(c[i])], origin));
    }
    w.total = static_cast<int>(parse_number(row[static_cast<size_t>(c_total)], origin));
    waves.push_back(w);
  }
  return waves;
}

MonthlySeries survey_balance(const std::vector<SurveyWave>& waves) {
  if (waves.empty()) throw DataError("survey_balance: no waves");
  MonthlySeries out;
  out.start = waves.front().month;
  out.unit = "percent";
  for (size_t i = 0; i < waves.size(); ++i) {
    const SurveyWave& w = waves[i];
    if (w.month.index() != out.start.index() + static_cast<int>(i)) {
      throw DataError("survey_balance: waves not contiguous at " + w.month.str());
    }
    if (w.total <= 0) throw DataError("survey_balance: zero respondents in " + w.month.str());
    if (w.a1 < 0 || w.a2 < 0 || w.a3 < 0 || w.a4 < 0 || w.a5 < 0 || w.a6 < 0) {
      throw DataError("survey_balance: negative count in " + w.month.str());
    }
    if (w.a1 + w.a2 + w.a3 + w.a4 + w.a5 + w.a6 != w.total) {
      throw DataError("survey_balance: counts do not sum to total in " + w.month.str());
    }
    out.values.push_back(100.0 * (w.a4 + w.a5 - w.a1 - w.a2) / static_cast<double>(w.total));
  }
  return out;
}

MonthlySeries interpolate_q_to_m(const QuarterlySeries& series) {
  if (series.size() < 2) throw DataError("interpolate_q_to_m: need at least 2 quarters");

  MonthlySeries out;
  out.start = series.start.first_month();
  const YearMonth last = series.quarter_at(series.size() - 1).last_month();
  const int n_months = last.index() - out.start.index() + 1;
  out.values.resize(static_cast<size_t>(n_months));

  const int first_anchor = series.start.mid_month().index() - out.start.index();
  for (int m = 0; m < n_months; ++m) {
    // Position relative to the anchor grid (anchors every 3 months).
    const int rel = m - first_anchor;
    double value;
    if (rel <= 0) {
      value = series.values.front();
    } else if (rel >= 3 * (series.size() - 1)) {
      value = series.values.back();
    } else {
      const int q = rel / 3;
      const int step = rel % 3;
      const double a = series.values[static_cast<size_t>(q)];
      const double b = series.values[static_cast<size_t>(q) + 1];
      value = a + (b - a) * step / 3.0;
    }
    out.values[static_cast<size_t>(m)] = value;
  }
  return out;
}

MonthlySeries yoy_pct_change(const MonthlySeries& series) {
  if (series.size() < 13) throw DataError("yoy_pct_change: need at least 13 months");
  MonthlySeries out;
  out.start = series.start.plus(12);
  out.unit = "percent";
  for (int t = 12; t < series.size(); ++t) {
    const double base = series.values[static_cast<size_t>(t - 12)];
    if (base <= 0.0) {
      throw DataError("yoy_pct_change: nonpositive base value at " + series.month_at(t - 12).str());
    }
    out.values.push_back(100.0 * (series.values[static_cast<size_t>(t)] / base - 1.0));
  }
  return out;
}

MonthlySeries deflate(const MonthlySeries& nominal, const MonthlySeries& cpi) {
  if (nominal.start != cpi.start || nominal.size() != cpi.size()) {
    throw DataError("deflate: nominal and CPI ranges are misaligned");
  }
  MonthlySeries out;
  out.start = nominal.start;
  out.unit = nominal.unit;
  for (int t = 0; t < nominal.size(); ++t) {
    const double p = cpi.values[static_cast<size_t>(t)];
    if (p <= 0.0) throw DataError("deflate: nonpositive CPI at " + cpi.month_at(t).str());
    out.values.push_back(nominal.values[static_cast<size_t>(t)] / p * 100.0);
  }
  return out;
}

MonthlySeries regime_demean(const MonthlySeries& series, YearMonth break_month) {
  const int br = break_month.index() - series.start.index();
  if (br <= 0 || br >= series.size()) {
    throw DataError("regime_demean: break " + break_month.str() + " outside series interior");
  }
  double pre = 0.0, post = 0.0;
  for (int t = 0; t < series.size(); ++t) {
    (t < br ? pre : post) += series.values[static_cast<size_t>(t)];
  }
  pre /= br;
  post /= series.size() - br;

  MonthlySeries out = series;
  for (int t = 0; t < series.size(); ++t) {
    out.values[static_cast<size_t>(t)] -= (t < br) ? pre : post;
  }
  return out;
}

MonthlySeries centered_ma(const MonthlySeries& series, int window) {
  if (window < 2 || window % 2 != 0) throw UsageError("centered_ma: window must be even and >= 2");
  if (series.size() < window + 1) {
    throw DataError("centered_ma: series shorter than window + 1");
  }
  const int half = window / 2;
  MonthlySeries out;
  out.start = series.start.plus(half);
  out.unit = series.unit;
  for (int t = half; t + half < series.size(); ++t) {
    double acc = 0.5 * series.values[static_cast<size_t>(t - half)] +
                 0.5 * series.values[static_cast<size_t>(t + half)];
    for (int j = -half + 1; j <= half - 1; ++j) {
      acc += series.values[static_cast<size_t>(t + j)];
    }
    out.values.push_back(acc / window);
  }
  return out;
}

}  // namespace emsi
