// emsikit: build a media sentiment index from news batch files and test its
// relationships with survey and macro series. One executable, subcommands
// per pipeline stage plus `run` for the whole workflow.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "emsi/adf.hpp"
#include "emsi/csv.hpp"
#include "emsi/dataset.hpp"
#include "emsi/distributions.hpp"
#include "emsi/error.hpp"
#include "emsi/granger.hpp"
#include "emsi/hp_filter.hpp"
#include "emsi/naive_bayes.hpp"
#include "emsi/pipeline.hpp"
#include "emsi/query.hpp"
#include "emsi/series.hpp"
#include "emsi/synthetic.hpp"
#include "emsi/util.hpp"

namespace {

using namespace emsi;

Metadata standalone_meta(std::uint64_t seed) {
  return {kToolVersion, std::to_string(seed), "standalone"};
}

// Index measure columns of a monthly CSV: "emsi" and "emsi_*" except the
// moving-average columns; falls back to every non-month column.
std::vector<std::string> measure_columns(const Dataset& data) {
  std::vector<std::string> out;
  for (const auto& name : data.names()) {
    if (name == "emsi" || (starts_with(name, "emsi_") && !starts_with(name, "emsi_ma"))) {
      out.push_back(name);
    }
  }
  if (out.empty()) out = data.names();
  return out;
}

Dataset load_monthly(const std::string& file) {
  const CsvTable table = parse_csv(read_file(file), file);
  if (table.column("month") >= 0) {
    // Tolerate non-numeric cells only in emsi_ma columns (blank endpoints).
    CsvTable cleaned = table;
    std::vector<size_t> keep;
    for (size_t c = 0; c < table.header.size(); ++c) {
      if (!starts_with(table.header[c], "emsi_ma")) keep.push_back(c);
    }
    cleaned.header.clear();
    for (size_t c : keep) cleaned.header.push_back(table.header[c]);
    cleaned.rows.clear();
    for (const auto& row : table.rows) {
      std::vector<std::string> r;
      for (size_t c : keep) r.push_back(row[c]);
      cleaned.rows.push_back(std::move(r));
    }
    std::string csv;
    {
      CsvWriter w;
      w.row(cleaned.header);
      for (const auto& row : cleaned.rows) w.row(row);
      csv = w.str();
    }
    return Dataset::from_csv(csv, file);
  }
  throw DataError(file + ": expected a 'month' column");
}

void cmd_ingest(const std::string& in_dir, const std::string& query_file,
                const std::string& out) {
  const IngestReport report = ingest_stage(in_dir, query_file, out, standalone_meta(0));
  for (const auto& d : report.diagnostics) std::fprintf(stderr, "skipped: %s\n", d.c_str());
  std::printf("files=%d parsed=%d skipped=%d matched=%d -> %s\n", report.files, report.parsed,
              report.skipped, report.matched, out.c_str());
}

void cmd_query(const std::string& file, const std::string& text) {
  const std::string source = file.empty() ? text : trim(read_file(file));
  if (source.empty()) throw UsageError("query: give --file or --text");
  std::printf("%s\n", parse_query(source).str().c_str());
}

void cmd_train(const std::string& labels, const std::string& corpus, const std::string& model) {
  const TrainReport report = train_stage(labels, corpus, model, standalone_meta(0));
  for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("trained on %d docs, vocabulary %d -> %s\n", report.docs, report.vocab_size,
              model.c_str());
}

void cmd_cv(const std::string& labels, const std::string& corpus, int k, std::uint64_t seed) {
  const CvReport report = cv_stage(labels, corpus, k, seed);
  std::printf("pooled accuracy %.4f over %d docs (k=%d, seed=%llu)\n", report.pooled_accuracy,
              report.n, k, static_cast<unsigned long long>(seed));
  std::printf("confusion (rows: true, cols: predicted; positive negative irrelevant):\n");
  for (int t = 0; t < kNumClasses; ++t) {
    std::printf("  %-10s", class_str(static_cast<SentimentClass>(t)).c_str());
    for (int p = 0; p < kNumClasses; ++p) {
      std::printf(" %6d", report.confusion[static_cast<size_t>(t)][static_cast<size_t>(p)]);
    }
    std::printf("\n");
  }
}

void cmd_classify(const std::string& model, const std::string& corpus, const std::string& out) {
  const int n = classify_stage(model, corpus, out, standalone_meta(0));
  std::printf("classified %d items -> %s\n", n, out.c_str());
}

void cmd_top_words(const std::string& model_file, const std::string& a, const std::string& b,
                   int n) {
  const NbModel model = NbModel::deserialize(read_file(model_file));
  const auto ca = class_parse(a);
  const auto cb = class_parse(b);
  if (!ca || !cb) throw UsageError("top-words: classes must be positive|negative|irrelevant");
  for (const auto& d : discriminative_words(model, *ca, *cb, n)) {
    std::printf("%-24s %.6e\n", d.text.c_str(), d.diff);
  }
}

void cmd_index(const std::string& classified, const std::string& out,
               const std::string& subgroups, const std::string& locality, int ma) {
  std::vector<std::string> schemes;
  for (const auto& s : split(subgroups, ',')) {
    if (!trim(s).empty()) schemes.push_back(trim(s));
  }
  index_stage(classified, out, schemes, locality, ma, standalone_meta(0));
  std::printf("index -> %s\n", out.c_str());
}

void write_series(const MonthlySeries& s, const std::string& out) {
  write_file(out, s.to_csv());
  std::printf("-> %s (%d months)\n", out.c_str(), s.size());
}

void cmd_granger(const std::string& x_file, const std::string& y_file,
                 const std::string& controls_file, int kmax, const std::string& out) {
  const Dataset xs = load_monthly(x_file);
  const Dataset ys = load_monthly(y_file);
  const Dataset cs = load_monthly(controls_file);

  std::vector<std::pair<std::string, MonthlySeries>> series;
  for (const auto& n : measure_columns(xs)) series.emplace_back(n, xs.series(n));
  for (const auto& n : ys.names()) series.emplace_back(n, ys.series(n));
  for (const auto& n : cs.names()) series.emplace_back(n, cs.series(n));
  const Dataset data = Dataset::align(series);

  CsvWriter w;
  w.row({"measure", "survey", "direction", "k_forward", "k_reverse", "wald_forward", "p_forward",
         "wald_reverse", "p_reverse"});
  for (const auto& x : measure_columns(xs)) {
    for (const auto& y : ys.names()) {
      const GrangerResult g = granger_test(data, x, y, cs.names(), kmax);
      w.row({x, y, direction_str(g.direction), std::to_string(g.k_forward),
             std::to_string(g.k_reverse), fmt_double(g.x_block_forward.stat),
             fmt_double(g.x_block_forward.p_value), fmt_double(g.y_block_reverse.stat),
             fmt_double(g.y_block_reverse.p_value)});
      std::printf("%s vs %s: %s (p_fwd=%.4f, p_rev=%.4f)\n", x.c_str(), y.c_str(),
                  direction_str(g.direction).c_str(), g.x_block_forward.p_value,
                  g.y_block_reverse.p_value);
    }
  }
  if (!out.empty()) write_file(out, w.str());
}

void cmd_contemp(const std::string& x_file, const std::string& y_file,
                 const std::string& controls_file, int kmax, const std::string& out) {
  const Dataset xs = load_monthly(x_file);
  const Dataset ys = load_monthly(y_file);
  const Dataset cs = load_monthly(controls_file);
  const std::string x = measure_columns(xs).front();

  std::vector<std::pair<std::string, MonthlySeries>> series;
  series.emplace_back(x, xs.series(x));
  for (const auto& n : ys.names()) series.emplace_back(n, ys.series(n));
  for (const auto& n : cs.names()) series.emplace_back(n, cs.series(n));
  const Dataset data = Dataset::align(series);

  CsvWriter w;
  w.row({"dependent", "regressor", "coef", "hac_se", "t", "p"});
  for (const auto& y : ys.names()) {
    const OlsFit fit = contemporaneous_model(data, y, x, cs.names(), kmax);
    for (size_t i = 0; i < fit.names.size(); ++i) {
      const double coef = fit.fit.coef(static_cast<int>(i));
      const double se = fit.hac_se(static_cast<int>(i));
      const double t = coef / se;
      w.row({y, fit.names[i], fmt_double(coef), fmt_double(se), fmt_double(t),
             fmt_double(normal_pvalue(t))});
    }
    const int xi = fit.index_of(x);
    std::printf("%s: %s = %.4f (%.4f), adj R2 = %.3f, n = %d\n", y.c_str(), x.c_str(),
                fit.fit.coef(xi), fit.hac_se(xi), fit.fit.adj_r2, fit.fit.n);
  }
  if (!out.empty()) write_file(out, w.str());
}

void cmd_qlr(const std::string& file, const std::string& column, const std::string& corrected_out) {
  const Dataset data = load_monthly(file);
  const std::string name = column.empty() ? data.names().front() : column;
  const MonthlySeries series = data.series(name);
  const BreakResult br = qlr_break(series);
  std::printf("%s: sup-F = %.3f at %s (%s at the 5%% level)\n", name.c_str(), br.sup_f,
              br.break_month.str().c_str(), br.significant ? "break" : "no break");
  if (!corrected_out.empty()) {
    write_file(corrected_out, level_correct(series, br.break_month).to_csv());
    std::printf("level-corrected series -> %s\n", corrected_out.c_str());
  }
}

void cmd_summary(const std::string& x_file, const std::string& y_file,
                 const std::string& controls_file, int kmax, const std::string& out) {
  const Dataset xs = load_monthly(x_file);
  const Dataset ys = load_monthly(y_file);
  const Dataset cs = load_monthly(controls_file);

  std::vector<std::pair<std::string, MonthlySeries>> series;
  for (const auto& n : measure_columns(xs)) series.emplace_back(n, xs.series(n));
  for (const auto& n : ys.names()) series.emplace_back(n, ys.series(n));
  for (const auto& n : cs.names()) series.emplace_back(n, cs.series(n));
  const Dataset data = Dataset::align(series);

  std::vector<OlsFit> fits;
  for (const auto& x : measure_columns(xs)) {
    for (const auto& y : ys.names()) {
      const GrangerResult g = granger_test(data, x, y, cs.names(), kmax);
      fits.push_back(g.fit_forward);
    }
  }
  CsvWriter w;
  w.row({"variable", "significant", "total"});
  for (const auto& c : significance_summary(fits, cs.names())) {
    w.row({c.variable, std::to_string(c.significant), std::to_string(c.total)});
    std::printf("%-14s %d/%d\n", c.variable.c_str(), c.significant, c.total);
  }
  if (!out.empty()) write_file(out, w.str());
}

void cmd_synth(const std::string& out_dir, std::uint64_t seed, int months, int docs_per_day,
               int labeled, double beta, double rho) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.months = months;
  spec.docs_per_day = docs_per_day;
  spec.n_labeled = labeled;
  spec.survey_beta = beta;
  spec.survey_rho = rho;
  const SyntheticArtifacts artifacts = generate_synthetic(spec);
  write_synthetic(artifacts, out_dir);
  std::printf("synthetic fixture: %d docs (%d matching) -> %s\n", artifacts.n_docs,
              artifacts.n_matching, out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"media sentiment index pipeline"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // ingest
  std::string in_dir, query_file, out_file, text;
  auto* ingest = app.add_subcommand("ingest", "parse batch files and filter by query");
  ingest->add_option("--in", in_dir, "directory of batch files")->required();
  ingest->add_option("--query", query_file, "Boolean query file")->required();
  ingest->add_option("--out", out_file, "output corpus.csv")->required();

  auto* query = app.add_subcommand("query", "parse a Boolean query and print its tree");
  query->add_option("--file", query_file, "query file");
  query->add_option("--text", text, "query text");

  std::string labels_file, corpus_file, model_file, classified_file;
  auto* train_cmd = app.add_subcommand("train", "estimate the classifier");
  train_cmd->add_option("--labels", labels_file)->required();
  train_cmd->add_option("--corpus", corpus_file);
  train_cmd->add_option("--model", model_file)->required();

  int k_folds = 50;
  std::uint64_t seed = 1;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross validation");
  cv_cmd->add_option("--labels", labels_file)->required();
  cv_cmd->add_option("--corpus", corpus_file);
  cv_cmd->add_option("--k", k_folds);
  cv_cmd->add_option("--seed", seed);

  auto* classify_cmd = app.add_subcommand("classify", "classify a corpus");
  classify_cmd->add_option("--model", model_file)->required();
  classify_cmd->add_option("--corpus", corpus_file)->required();
  classify_cmd->add_option("--out", out_file)->required();

  std::string class_a = "positive", class_b = "negative";
  int top_n = 20;
  auto* top_cmd = app.add_subcommand("top-words", "largest conditional-probability differences");
  top_cmd->add_option("--model", model_file)->required();
  top_cmd->add_option("--a", class_a);
  top_cmd->add_option("--b", class_b);
  top_cmd->add_option("--n", top_n);

  std::string subgroups, locality_file;
  int ma_window = 0;
  auto* index_cmd = app.add_subcommand("index", "aggregate classifications into the index");
  index_cmd->add_option("--classified", classified_file)->required();
  index_cmd->add_option("--out", out_file)->required();
  index_cmd->add_option("--subgroups", subgroups, "comma list of schemes");
  index_cmd->add_option("--locality-table", locality_file);
  index_cmd->add_option("--ma", ma_window, "centered moving-average window");

  // prep group
  auto* prep = app.add_subcommand("prep", "series preparation");
  prep->require_subcommand(1);
  std::string gdp_file, nominal_file, cpi_file, waves_file, series_file, break_month, trend_out;
  double lambda = kHpLambdaMonthly;
  int max_lag = 12;

  auto* gap = prep->add_subcommand("gap", "quarterly series -> monthly cycle");
  gap->add_option("--gdp", gdp_file)->required();
  gap->add_option("--lambda", lambda);
  gap->add_option("--out", out_file)->required();
  gap->add_option("--trend-out", trend_out);

  auto* yoy = prep->add_subcommand("yoy", "year-on-year percent change");
  yoy->add_option("--in", series_file)->required();
  yoy->add_option("--out", out_file)->required();

  auto* defl = prep->add_subcommand("deflate", "nominal -> real via CPI");
  defl->add_option("--nominal", nominal_file)->required();
  defl->add_option("--cpi", cpi_file)->required();
  defl->add_option("--out", out_file)->required();

  auto* balance = prep->add_subcommand("balance", "survey waves -> net balance");
  balance->add_option("--waves", waves_file)->required();
  balance->add_option("--out", out_file)->required();

  auto* adf_cmd = prep->add_subcommand("adf", "unit-root test with constant");
  adf_cmd->add_option("--in", series_file)->required();
  adf_cmd->add_option("--max-lag", max_lag);

  auto* demean = prep->add_subcommand("demean", "regime-specific demeaning");
  demean->add_option("--in", series_file)->required();
  demean->add_option("--break", break_month, "YYYY-MM of the second regime")->required();
  demean->add_option("--out", out_file)->required();

  std::string x_file, y_file, controls_file, column, corrected_out;
  int kmax = 12;
  auto* granger_cmd = app.add_subcommand("granger", "two-way causality battery");
  granger_cmd->add_option("--x", x_file)->required();
  granger_cmd->add_option("--y", y_file)->required();
  granger_cmd->add_option("--controls", controls_file)->required();
  granger_cmd->add_option("--kmax", kmax);
  granger_cmd->add_option("--out", out_file);

  auto* contemp_cmd = app.add_subcommand("contemp", "contemporaneous association models");
  contemp_cmd->add_option("--x", x_file)->required();
  contemp_cmd->add_option("--y", y_file)->required();
  contemp_cmd->add_option("--controls", controls_file)->required();
  contemp_cmd->add_option("--kmax", kmax);
  contemp_cmd->add_option("--out", out_file);

  auto* qlr_cmd = app.add_subcommand("qlr", "sup-F intercept-break test");
  qlr_cmd->add_option("--series", series_file)->required();
  qlr_cmd->add_option("--column", column);
  qlr_cmd->add_option("--correct-out", corrected_out);

  auto* summary_cmd = app.add_subcommand("summary", "significant macro lag blocks");
  summary_cmd->add_option("--x", x_file)->required();
  summary_cmd->add_option("--y", y_file)->required();
  summary_cmd->add_option("--controls", controls_file)->required();
  summary_cmd->add_option("--kmax", kmax);
  summary_cmd->add_option("--out", out_file);

  std::string synth_dir;
  int months = 120, docs_per_day = 3, labeled = 500;
  double beta = 9.0, rho = 0.9;
  std::uint64_t synth_seed = 20170410;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic fixture");
  synth_cmd->add_option("--out", synth_dir)->required();
  synth_cmd->add_option("--seed", synth_seed);
  synth_cmd->add_option("--months", months);
  synth_cmd->add_option("--docs-per-day", docs_per_day);
  synth_cmd->add_option("--labeled", labeled);
  synth_cmd->add_option("--beta", beta);
  synth_cmd->add_option("--rho", rho);

  std::string config_file;
  std::vector<std::string> overrides;
  auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
  run_cmd->add_option("--config", config_file, "config file (default: $EMSIKIT_CONFIG)");
  run_cmd->add_option("--set", overrides, "override key=value")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (ingest->parsed()) cmd_ingest(in_dir, query_file, out_file);
    else if (query->parsed()) cmd_query(query_file, text);
    else if (train_cmd->parsed()) cmd_train(labels_file, corpus_file, model_file);
    else if (cv_cmd->parsed()) cmd_cv(labels_file, corpus_file, k_folds, seed);
    else if (classify_cmd->parsed()) cmd_classify(model_file, corpus_file, out_file);
    else if (top_cmd->parsed()) cmd_top_words(model_file, class_a, class_b, top_n);
    else if (index_cmd->parsed())
      cmd_index(classified_file, out_file, subgroups, locality_file, ma_window);
    else if (gap->parsed()) {
      const QuarterlySeries q = QuarterlySeries::from_csv(read_file(gdp_file), gdp_file);
      const HpResult hp = hp_filter(interpolate_q_to_m(q), lambda);
      write_series(hp.cycle, out_file);
      if (!trend_out.empty()) write_series(hp.trend, trend_out);
    } else if (yoy->parsed()) {
      write_series(yoy_pct_change(MonthlySeries::from_csv(read_file(series_file), series_file)),
                   out_file);
    } else if (defl->parsed()) {
      write_series(deflate(MonthlySeries::from_csv(read_file(nominal_file), nominal_file),
                           MonthlySeries::from_csv(read_file(cpi_file), cpi_file)),
                   out_file);
    } else if (balance->parsed()) {
      write_series(survey_balance(waves_from_csv(read_file(waves_file), waves_file)), out_file);
    } else if (adf_cmd->parsed()) {
      const AdfResult r =
          adf_test(MonthlySeries::from_csv(read_file(series_file), series_file), max_lag);
      std::printf("statistic=%.4f p_value=%.4f chosen_lag=%d nobs=%d\n", r.statistic, r.p_value,
                  r.chosen_lag, r.nobs);
    } else if (demean->parsed()) {
      write_series(regime_demean(MonthlySeries::from_csv(read_file(series_file), series_file),
                                 YearMonth::parse(break_month)),
                   out_file);
    } else if (granger_cmd->parsed()) cmd_granger(x_file, y_file, controls_file, kmax, out_file);
    else if (contemp_cmd->parsed()) cmd_contemp(x_file, y_file, controls_file, kmax, out_file);
    else if (qlr_cmd->parsed()) cmd_qlr(series_file, column, corrected_out);
    else if (summary_cmd->parsed()) cmd_summary(x_file, y_file, controls_file, kmax, out_file);
    else if (synth_cmd->parsed())
      cmd_synth(synth_dir, synth_seed, months, docs_per_day, labeled, beta, rho);
    else if (run_cmd->parsed()) {
      std::string path = config_file;
      if (path.empty()) {
        const char* env = std::getenv("EMSIKIT_CONFIG");
        if (env) path = env;
      }
      if (path.empty()) throw UsageError("run: give --config or set EMSIKIT_CONFIG");
      PipelineConfig config = PipelineConfig::from_file(path);
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("run: --set expects key=value");
        config.apply(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
      }
      const PipelineResult result = run_pipeline(config);
      for (const auto& artifact : result.artifacts) std::printf("wrote %s\n", artifact.c_str());
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
