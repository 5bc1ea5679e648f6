#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emsi/corpus.hpp"
#include "emsi/naive_bayes.hpp"
#include "emsi/series.hpp"

namespace emsi {

struct DailyCounts {
  Date date;
  int n_positive = 0;
  int n_negative = 0;
  int n_irrelevant = 0;
};

/// (p - n) / (p + n), or 0 on days without relevant items.
double daily_net(const DailyCounts& counts);

struct EmsiMonth {
  YearMonth month;
  double value = 0.0;  // in [-1, 1]
  int days = 0;        // calendar days in the month
  int n_positive = 0;
  int n_negative = 0;
  int n_irrelevant = 0;
};

struct EmsiSeries {
  std::vector<EmsiMonth> months;

  MonthlySeries values() const;
  bool empty() const { return months.empty(); }
};

/// Average of the daily nets over every calendar day of the month; days
/// without items contribute 0. Duplicate or out-of-month dates are errors.
double monthly_emsi(YearMonth month, const std::vector<DailyCounts>& days);

/// A classification joined with the item metadata the index needs.
struct ClassifiedItem {
  std::string id;
  Date date;
  std::string outlet;
  Channel channel = Channel::Print;
  int word_count = 0;
  SentimentClass predicted = SentimentClass::Irrelevant;
};

/// Monthly index over [first, last]; items outside the range are errors.
/// Irrelevant items never enter the nets but are counted per month.
EmsiSeries build_emsi(const std::vector<ClassifiedItem>& items, YearMonth first, YearMonth last);

enum class SubgroupSchemeKind { PrintOnline, NationwideLocal, FrequentInfrequent };

std::optional<SubgroupSchemeKind> subgroup_kind_parse(const std::string& s);

/// Exemplar points in (average words per item, item count) space for the
/// frequent / infrequent split.
struct FrequencyExemplars {
  double frequent_avg_words = 0.0;
  double frequent_items = 0.0;
  double infrequent_avg_words = 0.0;
  double infrequent_items = 0.0;
};

struct SubgroupScheme {
  SubgroupSchemeKind kind = SubgroupSchemeKind::PrintOnline;
  /// outlet -> "nationwide" | "local"; outlets not listed default to
  /// nationwide with a warning.
  std::map<std::string, std::string> locality;
  /// Overrides the percentile-based default exemplars.
  std::optional<FrequencyExemplars> exemplars;
};

struct OutletStats {
  std::string outlet;
  double avg_words = 0.0;
  int items = 0;
};

std::vector<OutletStats> outlet_stats(const std::vector<ClassifiedItem>& items);

/// Default exemplars: frequent at (10th pct avg words, 90th pct item
/// count), infrequent at (90th pct avg words, 10th pct item count).
FrequencyExemplars default_exemplars(const std::vector<OutletStats>& stats);

struct SubgroupResult {
  std::vector<std::pair<std::string, EmsiSeries>> groups;  // fixed group order
  std::vector<std::string> warnings;
};

/// Partitions items by scheme and builds one index per group over the same
/// month range. The frequent/infrequent scheme assigns each outlet to the
/// nearer exemplar and weights its items by inverse distance to that
/// exemplar, normalized within each (group, day).
SubgroupResult split_subgroups(const std::vector<ClassifiedItem>& items,
                               const SubgroupScheme& scheme, YearMonth first, YearMonth last);

}  // namespace emsi
