#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emsi/calendar.hpp"
#include "emsi/corpus.hpp"

namespace emsi {

struct OutletSpec {
  std::string name;
  Channel channel = Channel::Print;
  std::string locality = "nationwide";  // "nationwide" | "local"
};

/// Generator parameters for a desk-scale fixture with known ground truth:
/// a corpus drawn from per-class vocabularies whose sentiment follows a
/// latent AR(1), survey balances that respond to the realized index with a
/// known coefficient, and independent AR(1) macro controls.
struct SyntheticSpec {
  std::uint64_t seed = 20170410;
  YearMonth first_month{1998, 1};
  int months = 120;
  int docs_per_day = 3;

  double irrelevant_share = 0.30;
  // Latent monthly sentiment AR(1). The default of 0 keeps the index
  // serially unpredictable, which is what makes the one-way causal label
  // in truth.json exact: any persistence would let the survey (a
  // distributed lag of past index values) help filter the latent state,
  // turning the true relationship bidirectional in the Granger sense.
  double sentiment_phi = 0.0;
  double sentiment_sd = 0.50;

  double survey_beta = 9.0;      // sweNow response to the lagged index
  double survey_rho = 0.90;      // own-lag coefficient of every survey series
  double survey_noise_sd = 1.0;

  double macro_phi = 0.50;
  double macro_sd = 1.0;
  std::vector<std::string> macro_names{"gap", "unemp", "infl", "sekeur", "oil", "stock"};

  int class_vocab_size = 40;     // words per sentiment class
  int common_vocab_size = 30;    // words shared by all classes
  double common_word_share = 0.30;
  int body_words_min = 30;
  int body_words_max = 80;
  double unmatched_share = 0.03;  // documents that fail the search query

  int n_labeled = 500;
  std::vector<OutletSpec> outlets;  // default roster when empty
  int batch_size = 500;

  void validate() const;  // throws on unstable dynamics or bad ranges
};

/// Everything the pipeline consumes, as (filename, content) pairs plus the
/// ground-truth record for test assertions.
struct SyntheticArtifacts {
  std::vector<std::pair<std::string, std::string>> batch_files;
  std::string query_txt;
  std::string labels_csv;
  std::string survey_csv;
  std::string macro_csv;
  std::string locality_csv;
  std::string truth_json;

  int n_docs = 0;
  int n_matching = 0;  // documents that satisfy the query
};

SyntheticArtifacts generate_synthetic(const SyntheticSpec& spec);

/// Writes all artifact files into `dir` (batch files under dir/batches).
void write_synthetic(const SyntheticArtifacts& artifacts, const std::string& dir);

}  // namespace emsi
