#include "emsi/sentiment_index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "emsi/error.hpp"

namespace emsi {

namespace {

constexpr double kDistanceFloor = 1e-9;  // guards exact exemplar hits

struct DayAgg {
  double w_positive = 0.0;
  double w_negative = 0.0;
  int n_positive = 0;
  int n_negative = 0;
  int n_irrelevant = 0;
};

double weighted_net(const DayAgg& agg) {
  const double total = agg.w_positive + agg.w_negative;
  if (total <= 0.0) return 0.0;
  return (agg.w_positive - agg.w_negative) / total;
}

// Aggregates one group's weighted items into a monthly series.
EmsiSeries build_from_days(const std::map<std::pair<int, int>, DayAgg>& days, YearMonth first,
                           YearMonth last) {
  EmsiSeries out;
  for (int mi = first.index(); mi <= last.index(); ++mi) {
    const YearMonth month = YearMonth::from_index(mi);
    EmsiMonth em;
    em.month = month;
    em.days = month.days();
    double net_sum = 0.0;
    for (int d = 1; d <= em.days; ++d) {
      const auto it = days.find({mi, d});
      if (it == days.end()) continue;
      net_sum += weighted_net(it->second);
      em.n_positive += it->second.n_positive;
      em.n_negative += it->second.n_negative;
      em.n_irrelevant += it->second.n_irrelevant;
    }
    em.value = net_sum / em.days;
    out.months.push_back(em);
  }
  return out;
}

void add_item(std::map<std::pair<int, int>, DayAgg>& days, const ClassifiedItem& item,
              double weight) {
  DayAgg& agg = days[{item.date.year_month().index(), item.date.day}];
  switch (item.predicted) {
    case SentimentClass::Positive:
      agg.w_positive += weight;
      agg.n_positive += 1;
      break;
    case SentimentClass::Negative:
      agg.w_negative += weight;
      agg.n_negative += 1;
      break;
    case SentimentClass::Irrelevant:
      agg.n_irrelevant += 1;
      break;
  }
}

void check_range(const ClassifiedItem& item, YearMonth first, YearMonth last) {
  const int mi = item.date.year_month().index();
  if (mi < first.index() || mi > last.index()) {
    throw DataError("item " + item.id + " dated " + item.date.str() +
                    " falls outside the index range " + first.str() + ".." + last.str());
  }
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  const double rank = p * (static_cast<double>(values.size()) - 1.0);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = static_cast<size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

double daily_net(const DailyCounts& counts) {
  const int total = counts.n_positive + counts.n_negative;
  if (total == 0) return 0.0;
  return static_cast<double>(counts.n_positive - counts.n_negative) / total;
}

MonthlySeries EmsiSeries::values() const {
  MonthlySeries out;
  if (months.empty()) return out;
  out.start = months.front().month;
  out.unit = "ratio";
  for (const auto& m : months) out.values.push_back(m.value);
  return out;
}

double monthly_emsi(YearMonth month, const std::vector<DailyCounts>& days) {
  std::set<int> seen;
  double net_sum = 0.0;
  for (const auto& day : days) {
    if (day.date.year_month() != month) {
      throw DataError("monthly_emsi: date " + day.date.str() + " outside " + month.str());
    }
    if (!seen.insert(day.date.day).second) {
      throw DataError("monthly_emsi: duplicate date " + day.date.str());
    }
    net_sum += daily_net(day);
  }
  return net_sum / month.days();
}

EmsiSeries build_emsi(const std::vector<ClassifiedItem>& items, YearMonth first, YearMonth last) {
  if (last < first) throw UsageError("build_emsi: empty month range");
  std::map<std::pair<int, int>, DayAgg> days;
  for (const auto& item : items) {
    check_range(item, first, last);
    add_item(days, item, 1.0);
  }
  return build_from_days(days, first, last);
}

std::optional<SubgroupSchemeKind> subgroup_kind_parse(const std::string& s) {
  if (s == "print_online") return SubgroupSchemeKind::PrintOnline;
  if (s == "nationwide_local") return SubgroupSchemeKind::NationwideLocal;
  if (s == "frequent_infrequent") return SubgroupSchemeKind::FrequentInfrequent;
  return std::nullopt;
}

std::vector<OutletStats> outlet_stats(const std::vector<ClassifiedItem>& items) {
  std::map<std::string, std::pair<long long, int>> acc;  // outlet -> (word sum, items)
  for (const auto& item : items) {
    auto& entry = acc[item.outlet];
    entry.first += item.word_count;
    entry.second += 1;
  }
  std::vector<OutletStats> out;
  for (const auto& [outlet, entry] : acc) {
    out.push_back({outlet, static_cast<double>(entry.first) / entry.second, entry.second});
  }
  return out;
}

FrequencyExemplars default_exemplars(const std::vector<OutletStats>& stats) {
  if (stats.empty()) throw DataError("default_exemplars: no outlets");
  std::vector<double> words, counts;
  for (const auto& s : stats) {
    words.push_back(s.avg_words);
    counts.push_back(static_cast<double>(s.items));
  }
  FrequencyExemplars ex;
  ex.frequent_avg_words = percentile(words, 0.10);
  ex.frequent_items = percentile(counts, 0.90);
  ex.infrequent_avg_words = percentile(words, 0.90);
  ex.infrequent_items = percentile(counts, 0.10);
  return ex;
}

SubgroupResult split_subgroups(const std::vector<ClassifiedItem>& items,
                               const SubgroupScheme& scheme, YearMonth first, YearMonth last) {
  SubgroupResult result;
  std::vector<std::string> group_names;
  // group index and weight per item, resolved per outlet below
  std::map<std::string, std::pair<int, double>> outlet_group;

  switch (scheme.kind) {
    case SubgroupSchemeKind::PrintOnline:
      group_names = {"print", "online"};
      break;
    case SubgroupSchemeKind::NationwideLocal: {
      group_names = {"nationwide", "local"};
      std::set<std::string> missing;
      for (const auto& item : items) {
        const auto it = scheme.locality.find(item.outlet);
        if (it == scheme.locality.end()) {
          missing.insert(item.outlet);
          outlet_group[item.outlet] = {0, 1.0};
        } else if (it->second == "nationwide") {
          outlet_group[item.outlet] = {0, 1.0};
        } else if (it->second == "local") {
          outlet_group[item.outlet] = {1, 1.0};
        } else {
          throw DataError("locality table: outlet '" + item.outlet + "' has unknown locality '" +
                          it->second + "'");
        }
      }
      for (const auto& outlet : missing) {
        result.warnings.push_back("outlet '" + outlet +
                                  "' missing from locality table; assigned nationwide");
      }
      break;
    }
    case SubgroupSchemeKind::FrequentInfrequent: {
      group_names = {"frequent", "infrequent"};
      const auto stats = outlet_stats(items);
      const FrequencyExemplars ex =
          scheme.exemplars ? *scheme.exemplars : default_exemplars(stats);
      for (const auto& s : stats) {
        const double df = std::hypot(s.avg_words - ex.frequent_avg_words,
                                     static_cast<double>(s.items) - ex.frequent_items);
        const double di = std::hypot(s.avg_words - ex.infrequent_avg_words,
                                     static_cast<double>(s.items) - ex.infrequent_items);
        const int group = df <= di ? 0 : 1;  // ties go to frequent
        const double dist = group == 0 ? df : di;
        outlet_group[s.outlet] = {group, 1.0 / std::max(dist, kDistanceFloor)};
      }
      break;
    }
  }

  std::vector<std::map<std::pair<int, int>, DayAgg>> days(group_names.size());
  for (const auto& item : items) {
    check_range(item, first, last);
    int group;
    double weight;
    if (scheme.kind == SubgroupSchemeKind::PrintOnline) {
      group = item.channel == Channel::Print ? 0 : 1;
      weight = 1.0;
    } else {
      const auto& assignment = outlet_group.at(item.outlet);
      group = assignment.first;
      weight = assignment.second;
    }
    add_item(days[static_cast<size_t>(group)], item, weight);
  }

  for (size_t g = 0; g < group_names.size(); ++g) {
    result.groups.emplace_back(group_names[g], build_from_days(days[g], first, last));
  }
  return result;
}

}  // namespace emsi
