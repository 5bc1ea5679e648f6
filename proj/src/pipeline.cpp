#include "emsi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "emsi/adf.hpp"
#include "emsi/csv.hpp"
#include "emsi/dataset.hpp"
#include "emsi/distributions.hpp"
#include "emsi/error.hpp"
#include "emsi/ols.hpp"
#include "emsi/query.hpp"
#include "emsi/util.hpp"

namespace emsi {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  PipelineConfig config;
  const std::string content = read_file(path);
  int line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    config.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

void PipelineConfig::apply(const std::string& key, const std::string& value) {
  auto to_int = [&](const std::string& v) {
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw UsageError("config: bad integer for " + key + ": '" + v + "'");
    }
  };
  if (key == "seed") {
    try {
      seed = std::stoull(value);
    } catch (const std::exception&) {
      throw UsageError("config: bad seed '" + value + "'");
    }
  } else if (key == "input_dir") input_dir = value;
  else if (key == "query_file") query_file = value;
  else if (key == "labels_file") labels_file = value;
  else if (key == "survey_file") survey_file = value;
  else if (key == "macro_file") macro_file = value;
  else if (key == "locality_file") locality_file = value;
  else if (key == "out_dir") out_dir = value;
  else if (key == "lambda") {
    try {
      hp_lambda = std::stod(value);
    } catch (const std::exception&) {
      throw UsageError("config: bad lambda '" + value + "'");
    }
  } else if (key == "kmax") k_max = to_int(value);
  else if (key == "bg_lags") bg_lags = to_int(value);
  else if (key == "bandwidth") bandwidth = to_int(value);
  else if (key == "cv_folds") cv_folds = to_int(value);
  else if (key == "ma_window") ma_window = to_int(value);
  else if (key == "subgroups") {
    subgroups.clear();
    for (const auto& part : split(value, ',')) {
      const std::string name = trim(part);
      if (name.empty()) continue;
      if (!subgroup_kind_parse(name)) throw UsageError("config: unknown subgroup scheme '" + name + "'");
      subgroups.push_back(name);
    }
  } else {
    throw UsageError("config: unknown key '" + key + "'");
  }
}

std::string PipelineConfig::canonical() const {
  std::string subgroup_list;
  for (size_t i = 0; i < subgroups.size(); ++i) {
    if (i) subgroup_list += ",";
    subgroup_list += subgroups[i];
  }
  std::string out;
  out += "bandwidth=" + std::to_string(bandwidth) + "\n";
  out += "bg_lags=" + std::to_string(bg_lags) + "\n";
  out += "cv_folds=" + std::to_string(cv_folds) + "\n";
  out += "input_dir=" + input_dir + "\n";
  out += "kmax=" + std::to_string(k_max) + "\n";
  out += "labels_file=" + labels_file + "\n";
  out += "lambda=" + fmt_double(hp_lambda) + "\n";
  out += "locality_file=" + locality_file + "\n";
  out += "ma_window=" + std::to_string(ma_window) + "\n";
  out += "macro_file=" + macro_file + "\n";
  out += "query_file=" + query_file + "\n";
  out += "seed=" + std::to_string(seed) + "\n";
  out += "subgroups=" + subgroup_list + "\n";
  out += "survey_file=" + survey_file + "\n";
  return out;
}

std::string PipelineConfig::config_hash() const { return hex64(fnv1a64(canonical())); }

Metadata Metadata::from_config(const PipelineConfig& config) {
  return {kToolVersion, std::to_string(config.seed), config.config_hash()};
}

std::string Metadata::csv_header() const {
  std::string out;
  out += "# tool: " + version + "\n";
  out += "# seed: " + seed + "\n";
  out += "# config: " + config_hash + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> Metadata::kv() const {
  return {{"tool", version}, {"seed", seed}, {"config", config_hash}};
}

// ---------------------------------------------------------------------------
// Ingest

IngestReport ingest_stage(const std::string& input_dir, const std::string& query_file,
                          const std::string& out_csv, const Metadata& meta) {
  if (!fs::is_directory(input_dir)) throw DataError("ingest: not a directory: " + input_dir);
  const BooleanQuery query = parse_query(trim(read_file(query_file)));

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(input_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("ingest: no batch files in " + input_dir);

  IngestReport report;
  std::vector<MediaItem> items;
  for (const auto& file : files) {
    ++report.files;
    const std::string stem = fs::path(file).stem().string();
    ParseResult parsed = parse_batch(read_file(file), stem);
    report.parsed += static_cast<int>(parsed.items.size());
    report.skipped += static_cast<int>(parsed.errors.size());
    for (const auto& err : parsed.errors) {
      report.diagnostics.push_back(stem + " record " + std::to_string(err.record) + " (byte " +
                                   std::to_string(err.offset) + "): " + err.message);
    }
    for (auto& item : parsed.items) items.push_back(std::move(item));
  }

  const Corpus corpus = filter_corpus(Corpus::from_items(std::move(items)), query);
  report.matched = static_cast<int>(corpus.size());

  std::string out = meta.csv_header();
  out += "# skipped_records: " + std::to_string(report.skipped) + "\n";
  out += corpus.to_csv();
  write_file(out_csv, out);
  return report;
}

// ---------------------------------------------------------------------------
// Train / cross-validate / classify

namespace {

struct LabeledSample {
  std::vector<LabeledDoc> docs;
  Vocabulary vocab;
};

LabeledSample load_labeled(const std::string& labels_file, const std::string& corpus_file) {
  const CsvTable labels = parse_csv(read_file(labels_file), labels_file);
  const int c_id = labels.require_column("id");
  const int c_label = labels.require_column("label");
  const int c_text = labels.column("text");

  std::map<std::string, const MediaItem*> by_id;
  Corpus corpus;
  const bool need_corpus = c_text < 0 || std::any_of(labels.rows.begin(), labels.rows.end(),
                                                     [&](const auto& row) {
                                                       return row[static_cast<size_t>(c_text)].empty();
                                                     });
  if (need_corpus) {
    if (corpus_file.empty()) {
      throw DataError("labels file has no text column and no corpus was supplied");
    }
    corpus = Corpus::from_csv(read_file(corpus_file), corpus_file);
    for (const auto& item : corpus.items()) by_id[item.id] = &item;
  }

  std::vector<TokenStream> token_streams;
  std::vector<std::pair<std::string, SentimentClass>> meta;
  for (size_t r = 0; r < labels.rows.size(); ++r) {
    const auto& row = labels.rows[r];
    const std::string& id = row[static_cast<size_t>(c_id)];
    const auto label = class_parse(row[static_cast<size_t>(c_label)]);
    if (!label) {
      throw DataError(labels_file + ": unknown label '" + row[static_cast<size_t>(c_label)] +
                      "' for id " + id);
    }
    std::string text;
    if (c_text >= 0 && !row[static_cast<size_t>(c_text)].empty()) {
      text = row[static_cast<size_t>(c_text)];
    } else {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError(labels_file + ": id '" + id + "' not in corpus");
      text = it->second->text();
    }
    token_streams.push_back(tokenize(text));
    meta.emplace_back(id, *label);
  }

  LabeledSample sample;
  sample.vocab = build_vocabulary(token_streams);
  for (size_t i = 0; i < token_streams.size(); ++i) {
    sample.docs.push_back(
        {meta[i].first, vectorize(token_streams[i], sample.vocab), meta[i].second});
  }
  return sample;
}

}  // namespace

TrainReport train_stage(const std::string& labels_file, const std::string& corpus_file,
                        const std::string& model_file, const Metadata& meta) {
  const LabeledSample sample = load_labeled(labels_file, corpus_file);
  const NbModel model = train(sample.docs, sample.vocab);
  write_file(model_file, model.serialize(meta.kv()));
  return {static_cast<int>(sample.docs.size()), sample.vocab.size(), model.warnings()};
}

CvReport cv_stage(const std::string& labels_file, const std::string& corpus_file, int k,
                  std::uint64_t seed) {
  const LabeledSample sample = load_labeled(labels_file, corpus_file);
  return cross_validate(sample.docs, k, seed, sample.vocab);
}

int classify_stage(const std::string& model_file, const std::string& corpus_file,
                   const std::string& out_csv, const Metadata& meta) {
  const NbModel model = NbModel::deserialize(read_file(model_file));
  const Corpus corpus = Corpus::from_csv(read_file(corpus_file), corpus_file);

  CsvWriter w;
  w.row({"id", "date", "outlet", "channel", "word_count", "predicted", "score_positive",
         "score_negative", "score_irrelevant"});
  for (const auto& item : corpus.items()) {
    const DocVector vec = vectorize(tokenize(item.text()), model.vocabulary());
    const ClassifiedDoc result = classify(model, vec, item.id);
    std::array<std::string, kNumClasses> scores;
    for (size_t slot = 0; slot < model.classes().size(); ++slot) {
      scores[static_cast<size_t>(model.classes()[slot])] = fmt_double(result.log_scores[slot]);
    }
    w.row({item.id, item.published_at.str(), item.outlet, channel_str(item.channel),
           std::to_string(item.word_count), class_str(result.predicted), scores[0], scores[1],
           scores[2]});
  }
  write_file(out_csv, meta.csv_header() + w.str());
  return static_cast<int>(corpus.size());
}

// ---------------------------------------------------------------------------
// Index

namespace {

std::vector<ClassifiedItem> load_classified(const std::string& classified_file) {
  const CsvTable table = parse_csv(read_file(classified_file), classified_file);
  const int c_id = table.require_column("id");
  const int c_date = table.require_column("date");
  const int c_outlet = table.require_column("outlet");
  const int c_channel = table.require_column("channel");
  const int c_wc = table.require_column("word_count");
  const int c_pred = table.require_column("predicted");

  std::vector<ClassifiedItem> items;
  for (const auto& row : table.rows) {
    ClassifiedItem item;
    item.id = row[static_cast<size_t>(c_id)];
    const auto date = Date::parse(row[static_cast<size_t>(c_date)]);
    if (!date) throw DataError(classified_file + ": bad date for id " + item.id);
    item.date = *date;
    item.outlet = row[static_cast<size_t>(c_outlet)];
    const auto channel = channel_parse(row[static_cast<size_t>(c_channel)]);
    if (!channel) throw DataError(classified_file + ": bad channel for id " + item.id);
    item.channel = *channel;
    item.word_count = std::atoi(row[static_cast<size_t>(c_wc)].c_str());
    const auto predicted = class_parse(row[static_cast<size_t>(c_pred)]);
    if (!predicted) throw DataError(classified_file + ": bad class for id " + item.id);
    item.predicted = *predicted;
    items.push_back(std::move(item));
  }
  if (items.empty()) throw DataError(classified_file + ": no classified items");
  return items;
}

std::map<std::string, std::string> load_locality(const std::string& locality_file) {
  std::map<std::string, std::string> table;
  if (locality_file.empty()) return table;
  const CsvTable csv = parse_csv(read_file(locality_file), locality_file);
  const int c_outlet = csv.require_column("outlet");
  const int c_loc = csv.require_column("locality");
  for (const auto& row : csv.rows) {
    table[row[static_cast<size_t>(c_outlet)]] = row[static_cast<size_t>(c_loc)];
  }
  return table;
}

}  // namespace

void index_stage(const std::string& classified_file, const std::string& out_csv,
                 const std::vector<std::string>& subgroups, const std::string& locality_file,
                 int ma_window, const Metadata& meta) {
  const auto items = load_classified(classified_file);

  YearMonth first = items.front().date.year_month();
  YearMonth last = first;
  for (const auto& item : items) {
    const YearMonth m = item.date.year_month();
    if (m < first) first = m;
    if (last < m) last = m;
  }

  const EmsiSeries total = build_emsi(items, first, last);

  std::vector<std::pair<std::string, EmsiSeries>> group_series;
  for (const auto& name : subgroups) {
    const auto kind = subgroup_kind_parse(name);
    if (!kind) throw UsageError("index: unknown subgroup scheme '" + name + "'");
    SubgroupScheme scheme;
    scheme.kind = *kind;
    if (*kind == SubgroupSchemeKind::NationwideLocal) {
      scheme.locality = load_locality(locality_file);
    }
    SubgroupResult split = split_subgroups(items, scheme, first, last);
    for (const auto& warning : split.warnings) {
      std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    for (auto& [group, series] : split.groups) {
      group_series.emplace_back("emsi_" + group, std::move(series));
    }
  }

  std::optional<MonthlySeries> ma;
  std::string ma_name;
  if (ma_window > 0) {
    ma = centered_ma(total.values(), ma_window);
    ma_name = "emsi_ma" + std::to_string(ma_window);
  }

  CsvWriter w;
  std::vector<std::string> header = {"month", "emsi", "n_positive", "n_negative", "n_irrelevant"};
  for (const auto& [name, series] : group_series) header.push_back(name);
  if (ma) header.push_back(ma_name);
  w.row(header);

  for (size_t i = 0; i < total.months.size(); ++i) {
    const EmsiMonth& m = total.months[i];
    std::vector<std::string> row = {m.month.str(), fmt_double(m.value),
                                    std::to_string(m.n_positive), std::to_string(m.n_negative),
                                    std::to_string(m.n_irrelevant)};
    for (const auto& [name, series] : group_series) {
      row.push_back(fmt_double(series.months[i].value));
    }
    if (ma) {
      const auto off = ma->offset(m.month);
      row.push_back(off ? fmt_double(ma->values[static_cast<size_t>(*off)]) : "");
    }
    w.row(row);
  }
  write_file(out_csv, meta.csv_header() + w.str());
}

// ---------------------------------------------------------------------------
// Dataset merge

DatasetStageResult dataset_stage(const std::string& emsi_file, const std::string& survey_file,
                                 const std::string& macro_file, const std::string& out_csv,
                                 const Metadata& meta) {
  DatasetStageResult result;
  std::vector<std::pair<std::string, MonthlySeries>> series;

  const CsvTable emsi = parse_csv(read_file(emsi_file), emsi_file);
  const int c_month = emsi.require_column("month");
  for (size_t c = 0; c < emsi.header.size(); ++c) {
    const std::string& name = emsi.header[c];
    const bool is_measure =
        name == "emsi" || (starts_with(name, "emsi_") && !starts_with(name, "emsi_ma"));
    if (!is_measure) continue;
    MonthlySeries s;
    for (size_t r = 0; r < emsi.rows.size(); ++r) {
      if (r == 0) s.start = YearMonth::parse(emsi.rows[r][static_cast<size_t>(c_month)]);
      s.values.push_back(std::strtod(emsi.rows[r][c].c_str(), nullptr));
    }
    result.measures.push_back(name);
    series.emplace_back(name, std::move(s));
  }

  const Dataset survey = Dataset::from_csv(read_file(survey_file), survey_file);
  for (const auto& name : survey.names()) {
    result.surveys.push_back(name);
    series.emplace_back(name, survey.series(name));
  }
  const Dataset macro = Dataset::from_csv(read_file(macro_file), macro_file);
  for (const auto& name : macro.names()) {
    result.macros.push_back(name);
    series.emplace_back(name, macro.series(name));
  }

  const Dataset merged = Dataset::align(series);
  write_file(out_csv, meta.csv_header() + merged.to_csv());
  return result;
}

// ---------------------------------------------------------------------------
// Hypothesis battery + report

namespace {

std::string stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

std::string direction_symbol(Direction d) {
  switch (d) {
    case Direction::XtoY: return "->";
    case Direction::YtoX: return "<-";
    case Direction::Bidirectional: return "<->";
    case Direction::None: return ".";
  }
  return "?";
}

void append_line(std::string& out, const std::string& line) { out += line + "\n"; }

std::string pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::vector<GrangerCell> tests_stage(const std::string& dataset_file,
                                     const DatasetStageResult& columns, int k_max, int bandwidth,
                                     const std::string& granger_csv,
                                     const std::string& report_txt, const Metadata& meta) {
  const Dataset data = Dataset::from_csv(read_file(dataset_file), dataset_file);
  (void)bandwidth;  // battery fits use the default rule; kept for CLI parity

  std::vector<GrangerCell> cells;
  for (const auto& measure : columns.measures) {
    for (const auto& survey : columns.surveys) {
      GrangerCell cell;
      cell.measure = measure;
      cell.survey = survey;
      cell.result = granger_test(data, measure, survey, columns.macros, k_max);
      cells.push_back(std::move(cell));
    }
  }

  // granger.csv
  {
    CsvWriter w;
    w.row({"measure", "survey", "direction", "k_forward", "k_reverse", "wald_forward",
           "p_forward", "wald_reverse", "p_reverse", "flagged_forward", "flagged_reverse"});
    for (const auto& cell : cells) {
      const GrangerResult& g = cell.result;
      w.row({cell.measure, cell.survey, direction_str(g.direction), std::to_string(g.k_forward),
             std::to_string(g.k_reverse), fmt_double(g.x_block_forward.stat),
             fmt_double(g.x_block_forward.p_value), fmt_double(g.y_block_reverse.stat),
             fmt_double(g.y_block_reverse.p_value), g.flagged_forward ? "1" : "0",
             g.flagged_reverse ? "1" : "0"});
    }
    write_file(granger_csv, meta.csv_header() + w.str());
  }

  // report.txt
  std::string rep;
  append_line(rep, std::string(kToolVersion) + " report");
  append_line(rep, "seed " + meta.seed + ", config " + meta.config_hash);
  append_line(rep, "");

  append_line(rep, "Means of index measures (HAC t-ratios)");
  for (const auto& measure : columns.measures) {
    const MeanTest mt = mean_test(data.values(measure));
    char buf[160];
    std::snprintf(buf, sizeof(buf), "  %-18s %9.4f  (%6.2f) %s", measure.c_str(), mt.mean,
                  mt.t_ratio, stars(mt.p_value).c_str());
    append_line(rep, buf);
  }
  append_line(rep, "");

  // Subgroup mean/variance contrasts where both sides are present.
  const std::vector<std::pair<std::string, std::string>> contrasts = {
      {"emsi_print", "emsi_online"},
      {"emsi_nationwide", "emsi_local"},
      {"emsi_frequent", "emsi_infrequent"},
  };
  bool any_contrast = false;
  for (const auto& [a, b] : contrasts) {
    if (!data.has(a) || !data.has(b)) continue;
    if (!any_contrast) {
      append_line(rep, "Subgroup differences (mean diff, variance ratio)");
      any_contrast = true;
    }
    const DiffMeanTest dm = diff_mean_test(data.series(a), data.series(b));
    const VarianceTest dv = diff_var_test(data.series(a), data.series(b));
    char buf[200];
    std::snprintf(buf, sizeof(buf), "  %-34s %9.4f (%6.2f)%-3s  F=%7.3f %s",
                  (a + " - " + b).c_str(), dm.diff, dm.t_ratio, stars(dm.p_value).c_str(), dv.f,
                  stars(dv.p_value).c_str());
    append_line(rep, buf);
  }
  if (any_contrast) append_line(rep, "");

  append_line(rep, "Granger directions at the 5% level (row -> column)");
  {
    std::string head = "  " + pad("measure", 20);
    for (const auto& survey : columns.surveys) head += pad(survey, 12);
    append_line(rep, head);
    for (const auto& measure : columns.measures) {
      std::string line = "  " + pad(measure, 20);
      for (const auto& survey : columns.surveys) {
        for (const auto& cell : cells) {
          if (cell.measure == measure && cell.survey == survey) {
            line += pad(direction_symbol(cell.result.direction), 12);
          }
        }
      }
      append_line(rep, line);
    }
  }
  append_line(rep, "");

  append_line(rep, "Contemporaneous association (dependent: survey, regressor: " +
                       columns.measures.front() + ")");
  for (const auto& survey : columns.surveys) {
    const OlsFit fit =
        contemporaneous_model(data, survey, columns.measures.front(), columns.macros, k_max);
    const int idx = fit.index_of(columns.measures.front());
    const double coef = fit.fit.coef(idx);
    const double se = fit.hac_se(idx);
    const double p = normal_pvalue(coef / se);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "  %-12s %9.4f (%7.4f) %-3s  adjR2=%5.2f n=%d",
                  survey.c_str(), coef, se, stars(p).c_str(), fit.fit.adj_r2, fit.fit.n);
    append_line(rep, buf);
  }
  append_line(rep, "");

  append_line(rep, "Macro lag blocks significant at 5% across forward equations");
  {
    std::vector<OlsFit> forward_fits;
    for (const auto& cell : cells) forward_fits.push_back(cell.result.fit_forward);
    for (const auto& count : significance_summary(forward_fits, columns.macros)) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "  %-12s %d/%d", count.variable.c_str(), count.significant,
                    count.total);
      append_line(rep, buf);
    }
  }
  append_line(rep, "");

  append_line(rep, "Long-run effects from forward equations (sum of measure lags / (1 - sum of own lags))");
  for (const auto& cell : cells) {
    const GrangerResult& g = cell.result;
    double beta = 0.0;
    for (int i : g.fit_forward.block(cell.measure)) beta += g.fit_forward.fit.coef(i);
    double ar = 0.0;
    for (int i : g.fit_forward.block(cell.survey)) ar += g.fit_forward.fit.coef(i);
    char buf[160];
    if (ar < 1.0) {
      std::snprintf(buf, sizeof(buf), "  %-18s -> %-12s %9.3f", cell.measure.c_str(),
                    cell.survey.c_str(), long_run_effect(beta, ar));
    } else {
      std::snprintf(buf, sizeof(buf), "  %-18s -> %-12s n/a (own lags sum to %.3f)",
                    cell.measure.c_str(), cell.survey.c_str(), ar);
    }
    append_line(rep, buf);
  }

  write_file(report_txt, rep);
  return cells;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

template <typename F>
auto run_stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw DataError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  if (!fs::is_directory(config.input_dir)) {
    throw DataError("config: input_dir is not a directory: " + config.input_dir);
  }
  for (const std::string* file : {&config.query_file, &config.labels_file, &config.survey_file,
                                  &config.macro_file}) {
    if (file->empty() || !fs::is_regular_file(*file)) {
      throw DataError("config: missing input file: " + (file->empty() ? "(unset)" : *file));
    }
  }
  if (!config.locality_file.empty() && !fs::is_regular_file(config.locality_file)) {
    throw DataError("config: missing locality file: " + config.locality_file);
  }

  const Metadata meta = Metadata::from_config(config);
  fs::create_directories(config.out_dir);
  const auto path = [&](const char* name) { return (fs::path(config.out_dir) / name).string(); };

  PipelineResult result;
  auto emit = [&](const std::string& p) { result.artifacts.push_back(p); };

  run_stage("ingest", [&] {
    return ingest_stage(config.input_dir, config.query_file, path("corpus.csv"), meta);
  });
  emit(path("corpus.csv"));

  run_stage("train", [&] {
    return train_stage(config.labels_file, path("corpus.csv"), path("model.bin"), meta);
  });
  emit(path("model.bin"));

  if (config.cv_folds > 1) {
    const CvReport cv = run_stage("cv", [&] {
      return cv_stage(config.labels_file, path("corpus.csv"), config.cv_folds, config.seed);
    });
    CsvWriter w;
    w.row({"fold", "accuracy"});
    for (size_t f = 0; f < cv.fold_accuracy.size(); ++f) {
      w.row({std::to_string(f + 1), fmt_double(cv.fold_accuracy[f])});
    }
    w.row({"pooled", fmt_double(cv.pooled_accuracy)});
    write_file(path("cv.csv"), meta.csv_header() + w.str());
    emit(path("cv.csv"));
  }

  run_stage("classify", [&] {
    return classify_stage(path("model.bin"), path("corpus.csv"), path("classified.csv"), meta);
  });
  emit(path("classified.csv"));

  run_stage("index", [&] {
    index_stage(path("classified.csv"), path("emsi.csv"), config.subgroups, config.locality_file,
                config.ma_window, meta);
    return 0;
  });
  emit(path("emsi.csv"));

  const DatasetStageResult columns = run_stage("dataset", [&] {
    return dataset_stage(path("emsi.csv"), config.survey_file, config.macro_file,
                         path("dataset.csv"), meta);
  });
  emit(path("dataset.csv"));

  result.granger = run_stage("tests", [&] {
    return tests_stage(path("dataset.csv"), columns, config.k_max, config.bandwidth,
                       path("granger.csv"), path("report.txt"), meta);
  });
  emit(path("granger.csv"));
  emit(path("report.txt"));

  return result;
}

}  // namespace emsi
