#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emsi/granger.hpp"
#include "emsi/naive_bayes.hpp"
#include "emsi/sentiment_index.hpp"

namespace emsi {

inline constexpr const char* kToolVersion = "emsikit 0.1.0";

/// Declarative pipeline configuration; every key can come from the config
/// file or be overridden by a CLI flag.
struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string input_dir;
  std::string query_file;
  std::string labels_file;
  std::string survey_file;
  std::string macro_file;
  std::string locality_file;
  std::string out_dir = "out";
  double hp_lambda = 129600.0;
  int k_max = 6;
  int bg_lags = 12;
  int bandwidth = -1;  // -1: Newey-West default rule
  int cv_folds = 0;    // 0: skip cross validation
  int ma_window = 12;  // 0: skip the moving-average column
  std::vector<std::string> subgroups;  // subgroup scheme names

  static PipelineConfig from_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);

  /// Canonical key=value form of the semantic settings; the output
  /// directory is excluded so runs into different directories hash alike.
  std::string canonical() const;
  std::string config_hash() const;
};

/// Provenance stamped into every output file.
struct Metadata {
  std::string version;
  std::string seed;
  std::string config_hash;

  static Metadata from_config(const PipelineConfig& config);
  std::string csv_header() const;
  std::vector<std::pair<std::string, std::string>> kv() const;
};

struct IngestReport {
  int files = 0;
  int parsed = 0;
  int skipped = 0;
  int matched = 0;
  std::vector<std::string> diagnostics;  // one line per skipped record
};

/// Batch files -> filtered corpus.csv.
IngestReport ingest_stage(const std::string& input_dir, const std::string& query_file,
                          const std::string& out_csv, const Metadata& meta);

struct TrainReport {
  int docs = 0;
  int vocab_size = 0;
  std::vector<std::string> warnings;
};

/// labels.csv (+ corpus.csv for text lookup) -> model.bin.
TrainReport train_stage(const std::string& labels_file, const std::string& corpus_file,
                        const std::string& model_file, const Metadata& meta);

/// Deterministic k-fold cross validation over the labeled sample.
CvReport cv_stage(const std::string& labels_file, const std::string& corpus_file, int k,
                  std::uint64_t seed);

/// model.bin + corpus.csv -> classified.csv (with the metadata columns the
/// index stage needs).
int classify_stage(const std::string& model_file, const std::string& corpus_file,
                   const std::string& out_csv, const Metadata& meta);

/// classified.csv -> emsi.csv with optional subgroup and moving-average
/// columns.
void index_stage(const std::string& classified_file, const std::string& out_csv,
                 const std::vector<std::string>& subgroups, const std::string& locality_file,
                 int ma_window, const Metadata& meta);

struct DatasetStageResult {
  std::vector<std::string> measures;  // index columns (total + subgroups)
  std::vector<std::string> surveys;
  std::vector<std::string> macros;
};

/// emsi.csv + survey.csv + macro.csv -> month-aligned dataset.csv.
DatasetStageResult dataset_stage(const std::string& emsi_file, const std::string& survey_file,
                                 const std::string& macro_file, const std::string& out_csv,
                                 const Metadata& meta);

struct GrangerCell {
  std::string measure;
  std::string survey;
  GrangerResult result;
};

/// Full hypothesis battery: granger.csv plus a readable report.txt.
std::vector<GrangerCell> tests_stage(const std::string& dataset_file,
                                     const DatasetStageResult& columns, int k_max, int bandwidth,
                                     const std::string& granger_csv,
                                     const std::string& report_txt, const Metadata& meta);

struct PipelineResult {
  std::vector<std::string> artifacts;  // paths in write order
  std::vector<GrangerCell> granger;
};

/// Runs ingest -> train -> classify -> index -> dataset -> tests. Outputs
/// are byte-identical across reruns with identical inputs and config.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace emsi
