#include "emsi/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "emsi/csv.hpp"
#include "emsi/error.hpp"
#include "emsi/rng.hpp"
#include "emsi/util.hpp"

namespace emsi {

namespace {

std::vector<OutletSpec> default_roster() {
  return {
      {"Dagens Industri", Channel::Print, "nationwide"},
      {"Dagens Nyheter", Channel::Print, "nationwide"},
      {"Svenska Dagbladet", Channel::Print, "nationwide"},
      {"Affärsvärlden", Channel::Online, "nationwide"},
      {"Webfinanser", Channel::Online, "nationwide"},
      {"Nyhetsbyrån Direkt", Channel::Online, "nationwide"},
      {"Smålandsposten", Channel::Print, "local"},
      {"Norrköpings Tidningar", Channel::Online, "local"},
  };
}

std::vector<std::string> make_words(const std::string& prefix, int n) {
  std::vector<std::string> words;
  words.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix.c_str(), i);
    words.emplace_back(buf);
  }
  return words;
}

struct GeneratedDoc {
  std::string id;
  MediaItem item;
  int label = 2;  // class id
  bool matched = false;
};

}  // namespace

void SyntheticSpec::validate() const {
  // The (latent sentiment, survey) system is triangular, so the companion
  // spectral radius is the largest own-lag magnitude.
  const double radius =
      std::max({std::abs(sentiment_phi), std::abs(survey_rho), std::abs(macro_phi)});
  if (radius >= 1.0) {
    throw DataError("synthetic spec: unstable dynamics (spectral radius " +
                    fmt_double(radius) + " >= 1)");
  }
  if (months < 24) throw DataError("synthetic spec: need at least 24 months");
  if (docs_per_day < 1) throw DataError("synthetic spec: docs_per_day must be >= 1");
  if (irrelevant_share < 0.0 || irrelevant_share >= 1.0 || unmatched_share < 0.0 ||
      unmatched_share >= 1.0 || common_word_share < 0.0 || common_word_share >= 1.0) {
    throw DataError("synthetic spec: shares must lie in [0, 1)");
  }
  if (body_words_min < 3 || body_words_max < body_words_min) {
    throw DataError("synthetic spec: bad body word range");
  }
  if (batch_size < 1 || batch_size > 500) {
    throw DataError("synthetic spec: batch_size must be in 1..500");
  }
  if (class_vocab_size < 2 || common_vocab_size < 1) {
    throw DataError("synthetic spec: vocabulary sizes too small");
  }
}

SyntheticArtifacts generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();

  const auto roster = spec.outlets.empty() ? default_roster() : spec.outlets;
  const auto pos_words = make_words("pos", spec.class_vocab_size);
  const auto neg_words = make_words("neg", spec.class_vocab_size);
  const auto irr_words = make_words("irr", spec.class_vocab_size);
  const auto common_words = make_words("ord", spec.common_vocab_size);
  const std::vector<const std::vector<std::string>*> class_words = {&pos_words, &neg_words,
                                                                    &irr_words};

  Rng sentiment_rng = Rng::derive(spec.seed, "sentiment");
  Rng doc_rng = Rng::derive(spec.seed, "docs");
  Rng survey_rng = Rng::derive(spec.seed, "survey");
  Rng macro_rng = Rng::derive(spec.seed, "macro");
  Rng label_rng = Rng::derive(spec.seed, "labels");

  // Latent monthly sentiment, started from its stationary distribution.
  std::vector<double> latent(static_cast<size_t>(spec.months));
  latent[0] = sentiment_rng.normal(0.0, spec.sentiment_sd /
                                            std::sqrt(1.0 - spec.sentiment_phi * spec.sentiment_phi));
  for (int t = 1; t < spec.months; ++t) {
    latent[static_cast<size_t>(t)] = spec.sentiment_phi * latent[static_cast<size_t>(t) - 1] +
                                     sentiment_rng.normal(0.0, spec.sentiment_sd);
  }

  SyntheticArtifacts out;
  out.query_txt = "\"ekonomi\" AND (\"prognos\" OR \"rapport\")\n";

  std::vector<GeneratedDoc> docs;
  std::vector<double> true_emsi(static_cast<size_t>(spec.months), 0.0);
  std::array<long long, 3> class_counts{};

  int batch_no = 1;
  int ordinal_in_batch = 0;
  auto current_stem = [&]() {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "batch-%04d", batch_no);
    return std::string(buf);
  };

  for (int t = 0; t < spec.months; ++t) {
    const YearMonth month = spec.first_month.plus(t);
    const double q = 1.0 / (1.0 + std::exp(-2.0 * latent[static_cast<size_t>(t)]));
    double net_sum = 0.0;
    for (int day = 1; day <= month.days(); ++day) {
      int day_pos = 0, day_neg = 0;
      for (int i = 0; i < spec.docs_per_day; ++i) {
        GeneratedDoc doc;
        // Class draw: irrelevant first, then sentiment sign from q.
        if (doc_rng.uniform() < spec.irrelevant_share) {
          doc.label = 2;
        } else {
          doc.label = doc_rng.uniform() < q ? 0 : 1;
        }
        doc.matched = doc_rng.uniform() >= spec.unmatched_share;

        const auto& outlet = roster[static_cast<size_t>(doc_rng.below(roster.size()))];
        doc.item.outlet = outlet.name;
        doc.item.channel = outlet.channel;
        doc.item.published_at = Date{month.year, month.month, day};
        if (outlet.channel == Channel::Online) {
          doc.item.published_time = TimeOfDay{static_cast<int>(doc_rng.below(24)),
                                              static_cast<int>(doc_rng.below(60)),
                                              static_cast<int>(doc_rng.below(60))};
        }

        auto draw_word = [&]() -> const std::string& {
          if (doc_rng.uniform() < spec.common_word_share) {
            return common_words[static_cast<size_t>(doc_rng.below(common_words.size()))];
          }
          const auto& words = *class_words[static_cast<size_t>(doc.label)];
          return words[static_cast<size_t>(doc_rng.below(words.size()))];
        };

        doc.item.headline = draw_word() + " " + draw_word();
        std::string body;
        if (doc.matched) {
          body = "ekonomi ";
          body += doc_rng.uniform() < 0.5 ? "prognos" : "rapport";
        } else {
          body = draw_word();
        }
        const int body_words =
            spec.body_words_min +
            static_cast<int>(doc_rng.below(
                static_cast<std::uint64_t>(spec.body_words_max - spec.body_words_min + 1)));
        for (int w = 0; w < body_words; ++w) {
          body += " " + draw_word();
        }
        doc.item.body = body;

        if (ordinal_in_batch == spec.batch_size) {
          ++batch_no;
          ordinal_in_batch = 0;
        }
        ++ordinal_in_batch;
        char idbuf[48];
        std::snprintf(idbuf, sizeof(idbuf), "%s-%03d", current_stem().c_str(), ordinal_in_batch);
        doc.id = idbuf;
        doc.item.id = doc.id;

        if (doc.matched) {
          class_counts[static_cast<size_t>(doc.label)] += 1;
          if (doc.label == 0) ++day_pos;
          if (doc.label == 1) ++day_neg;
        }
        docs.push_back(std::move(doc));
      }
      if (day_pos + day_neg > 0) {
        net_sum += static_cast<double>(day_pos - day_neg) / (day_pos + day_neg);
      }
    }
    true_emsi[static_cast<size_t>(t)] = net_sum / month.days();
  }

  // Batch files in generation order (chronological, so ids sort with dates).
  {
    std::vector<MediaItem> batch;
    int file_no = 1;
    auto flush = [&]() {
      if (batch.empty()) return;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "batch-%04d.txt", file_no);
      out.batch_files.emplace_back(buf, serialize_batch(batch));
      batch.clear();
      ++file_no;
    };
    for (const auto& doc : docs) {
      batch.push_back(doc.item);
      if (static_cast<int>(batch.size()) == spec.batch_size) flush();
    }
    flush();
  }

  // Labeled sample over matching documents only.
  {
    std::vector<int> matching;
    for (size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].matched) matching.push_back(static_cast<int>(i));
    }
    out.n_docs = static_cast<int>(docs.size());
    out.n_matching = static_cast<int>(matching.size());
    if (spec.n_labeled > static_cast<int>(matching.size())) {
      throw DataError("synthetic spec: n_labeled exceeds matching documents");
    }
    label_rng.shuffle(matching);
    matching.resize(static_cast<size_t>(spec.n_labeled));
    std::sort(matching.begin(), matching.end());
    static const char* kClassNames[3] = {"positive", "negative", "irrelevant"};
    CsvWriter w;
    w.row({"id", "label"});
    for (int idx : matching) {
      const auto& doc = docs[static_cast<size_t>(idx)];
      w.row({doc.id, kClassNames[doc.label]});
    }
    out.labels_csv = w.str();
  }

  // Survey balances: sweNow responds to the realized lagged index, the
  // other three are independent AR(1) noise.
  {
    const double stat_sd = spec.survey_noise_sd / std::sqrt(1.0 - spec.survey_rho * spec.survey_rho);
    std::array<std::vector<double>, 4> survey;
    for (auto& s : survey) s.resize(static_cast<size_t>(spec.months));
    for (int v = 0; v < 4; ++v) {
      survey[static_cast<size_t>(v)][0] = survey_rng.normal(0.0, stat_sd);
    }
    for (int t = 1; t < spec.months; ++t) {
      for (int v = 0; v < 4; ++v) {
        double value = spec.survey_rho * survey[static_cast<size_t>(v)][static_cast<size_t>(t) - 1] +
                       survey_rng.normal(0.0, spec.survey_noise_sd);
        if (v == 0) value += spec.survey_beta * true_emsi[static_cast<size_t>(t) - 1];
        survey[static_cast<size_t>(v)][static_cast<size_t>(t)] = value;
      }
    }
    CsvWriter w;
    w.row({"month", "sweNow", "sweFuture", "ownNow", "ownFuture"});
    for (int t = 0; t < spec.months; ++t) {
      w.row({spec.first_month.plus(t).str(), fmt_double(survey[0][static_cast<size_t>(t)]),
             fmt_double(survey[1][static_cast<size_t>(t)]),
             fmt_double(survey[2][static_cast<size_t>(t)]),
             fmt_double(survey[3][static_cast<size_t>(t)])});
    }
    out.survey_csv = w.str();
  }

  // Independent AR(1) macro controls.
  {
    const double stat_sd = spec.macro_sd / std::sqrt(1.0 - spec.macro_phi * spec.macro_phi);
    std::vector<std::vector<double>> macro(spec.macro_names.size());
    for (auto& m : macro) {
      m.resize(static_cast<size_t>(spec.months));
      m[0] = macro_rng.normal(0.0, stat_sd);
    }
    for (int t = 1; t < spec.months; ++t) {
      for (auto& m : macro) {
        m[static_cast<size_t>(t)] =
            spec.macro_phi * m[static_cast<size_t>(t) - 1] + macro_rng.normal(0.0, spec.macro_sd);
      }
    }
    CsvWriter w;
    std::vector<std::string> header = {"month"};
    header.insert(header.end(), spec.macro_names.begin(), spec.macro_names.end());
    w.row(header);
    for (int t = 0; t < spec.months; ++t) {
      std::vector<std::string> row = {spec.first_month.plus(t).str()};
      for (const auto& m : macro) row.push_back(fmt_double(m[static_cast<size_t>(t)]));
      w.row(row);
    }
    out.macro_csv = w.str();
  }

  {
    CsvWriter w;
    w.row({"outlet", "locality"});
    for (const auto& o : roster) w.row({o.name, o.locality});
    out.locality_csv = w.str();
  }

  {
    nlohmann::json truth;
    truth["seed"] = spec.seed;
    truth["months"] = spec.months;
    truth["first_month"] = spec.first_month.str();
    truth["n_docs"] = out.n_docs;
    truth["n_matching"] = out.n_matching;
    truth["survey_beta"] = spec.survey_beta;
    truth["survey_rho"] = spec.survey_rho;
    truth["long_run_effect"] = spec.survey_beta / (1.0 - spec.survey_rho);
    truth["sentiment_phi"] = spec.sentiment_phi;
    truth["directions"] = {{"sweNow", "x_to_y"},
                           {"sweFuture", "none"},
                           {"ownNow", "none"},
                           {"ownFuture", "none"}};
    const long long relevant = class_counts[0] + class_counts[1] + class_counts[2];
    truth["class_counts"] = {{"positive", class_counts[0]},
                             {"negative", class_counts[1]},
                             {"irrelevant", class_counts[2]},
                             {"total", relevant}};
    out.truth_json = truth.dump(2) + "\n";
  }

  return out;
}

void write_synthetic(const SyntheticArtifacts& artifacts, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "batches");
  for (const auto& [name, content] : artifacts.batch_files) {
    write_file((fs::path(dir) / "batches" / name).string(), content);
  }
  write_file((fs::path(dir) / "query.txt").string(), artifacts.query_txt);
  write_file((fs::path(dir) / "labels.csv").string(), artifacts.labels_csv);
  write_file((fs::path(dir) / "survey.csv").string(), artifacts.survey_csv);
  write_file((fs::path(dir) / "macro.csv").string(), artifacts.macro_csv);
  write_file((fs::path(dir) / "outlets.csv").string(), artifacts.locality_csv);
  write_file((fs::path(dir) / "truth.json").string(), artifacts.truth_json);
}

}  // namespace emsi
