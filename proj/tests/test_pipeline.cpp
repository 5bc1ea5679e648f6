#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "emsi/error.hpp"
#include "emsi/pipeline.hpp"
#include "emsi/synthetic.hpp"
#include "emsi/util.hpp"

using namespace emsi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.seed = 909;
  spec.months = 72;
  spec.docs_per_day = 2;
  spec.n_labeled = 200;
  return spec;
}

PipelineConfig config_for(const fs::path& root) {
  PipelineConfig config;
  config.seed = 909;
  config.input_dir = (root / "fixtures" / "batches").string();
  config.query_file = (root / "fixtures" / "query.txt").string();
  config.labels_file = (root / "fixtures" / "labels.csv").string();
  config.survey_file = (root / "fixtures" / "survey.csv").string();
  config.macro_file = (root / "fixtures" / "macro.csv").string();
  config.locality_file = (root / "fixtures" / "outlets.csv").string();
  config.subgroups = {"print_online"};
  config.k_max = 4;
  return config;
}

}  // namespace

TEST_CASE("synthetic spec validation") {
  SyntheticSpec spec;
  spec.survey_rho = 1.0;
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("unstable"), DataError);
  spec = SyntheticSpec{};
  spec.months = 6;
  CHECK_THROWS_AS(spec.validate(), DataError);
  spec = SyntheticSpec{};
  spec.batch_size = 900;
  CHECK_THROWS_AS(spec.validate(), DataError);
  CHECK_NOTHROW(SyntheticSpec{}.validate());
}

TEST_CASE("synthetic artifacts are deterministic and well-formed") {
  const SyntheticSpec spec = small_spec();
  const SyntheticArtifacts a = generate_synthetic(spec);
  const SyntheticArtifacts b = generate_synthetic(spec);
  CHECK(a.labels_csv == b.labels_csv);
  CHECK(a.survey_csv == b.survey_csv);
  CHECK(a.macro_csv == b.macro_csv);
  CHECK(a.truth_json == b.truth_json);
  REQUIRE(a.batch_files.size() == b.batch_files.size());
  for (size_t i = 0; i < a.batch_files.size(); ++i) {
    CHECK(a.batch_files[i].second == b.batch_files[i].second);
  }
  CHECK(a.n_docs > 3000);
  CHECK(a.n_matching < a.n_docs);
  CHECK(a.n_matching > a.n_docs * 9 / 10);

  SyntheticSpec other = spec;
  other.seed = 910;
  CHECK(generate_synthetic(other).labels_csv != a.labels_csv);
}

TEST_CASE("pipeline config parsing, overrides and hashing") {
  TempDir tmp("emsikit-config-test");
  const std::string path = (tmp.path / "config.ini").string();
  write_file(path,
             "# comment\n"
             "seed = 42\n"
             "input_dir = /data/batches\n"
             "query_file = q.txt\n"
             "labels_file = labels.csv\n"
             "survey_file = survey.csv\n"
             "macro_file = macro.csv\n"
             "out_dir = out1\n"
             "kmax = 5\n"
             "subgroups = print_online, nationwide_local\n");
  PipelineConfig config = PipelineConfig::from_file(path);
  CHECK(config.seed == 42);
  CHECK(config.k_max == 5);
  REQUIRE(config.subgroups.size() == 2);
  CHECK(config.subgroups[1] == "nationwide_local");

  // The output directory does not change the config hash.
  PipelineConfig other = config;
  other.out_dir = "somewhere/else";
  CHECK(config.config_hash() == other.config_hash());
  other.seed = 43;
  CHECK(config.config_hash() != other.config_hash());

  CHECK_THROWS_AS(config.apply("unknown_key", "1"), UsageError);
  CHECK_THROWS_AS(config.apply("seed", "not-a-number"), UsageError);
  CHECK_THROWS_AS(config.apply("subgroups", "bogus_scheme"), UsageError);
}

TEST_CASE("full pipeline: artifacts, determinism, direction recovery") {
  TempDir tmp("emsikit-pipeline-test");
  const SyntheticArtifacts artifacts = generate_synthetic(small_spec());
  write_synthetic(artifacts, (tmp.path / "fixtures").string());

  PipelineConfig config = config_for(tmp.path);

  config.out_dir = (tmp.path / "run1").string();
  const PipelineResult first = run_pipeline(config);
  REQUIRE(first.artifacts.size() >= 6);
  for (const auto& artifact : first.artifacts) {
    CHECK(fs::exists(artifact));
  }

  config.out_dir = (tmp.path / "run2").string();
  const PipelineResult second = run_pipeline(config);
  REQUIRE(second.artifacts.size() == first.artifacts.size());
  for (size_t i = 0; i < first.artifacts.size(); ++i) {
    CHECK(read_file(first.artifacts[i]) == read_file(second.artifacts[i]));
  }

  // The generated one-way relationship is recovered.
  const nlohmann::json truth =
      nlohmann::json::parse(read_file((tmp.path / "fixtures" / "truth.json").string()));
  bool checked = false;
  for (const auto& cell : first.granger) {
    if (cell.measure == "emsi" && cell.survey == "sweNow") {
      CHECK(direction_str(cell.result.direction) == truth["directions"]["sweNow"]);
      checked = true;
    }
  }
  CHECK(checked);

  // Metadata headers carry tool version, seed and config hash.
  const std::string corpus = read_file((fs::path(config.out_dir) / "corpus.csv").string());
  CHECK(corpus.find("# tool: ") == 0);
  CHECK(corpus.find("# seed: 909") != std::string::npos);
  CHECK(corpus.find("# config: " + config.config_hash()) != std::string::npos);
}

TEST_CASE("stage isolation: standalone classify equals the fused run") {
  TempDir tmp("emsikit-stage-test");
  const SyntheticArtifacts artifacts = generate_synthetic(small_spec());
  write_synthetic(artifacts, (tmp.path / "fixtures").string());

  PipelineConfig config = config_for(tmp.path);
  config.out_dir = (tmp.path / "fused").string();
  run_pipeline(config);

  // Re-run the classify stage standalone against the fused run's inputs.
  const Metadata meta = Metadata::from_config(config);
  const std::string standalone = (tmp.path / "classified_standalone.csv").string();
  classify_stage((fs::path(config.out_dir) / "model.bin").string(),
                 (fs::path(config.out_dir) / "corpus.csv").string(), standalone, meta);
  CHECK(read_file(standalone) ==
        read_file((fs::path(config.out_dir) / "classified.csv").string()));
}

TEST_CASE("pipeline aborts with the stage name on a corrupted corpus") {
  TempDir tmp("emsikit-error-test");
  const SyntheticArtifacts artifacts = generate_synthetic(small_spec());
  write_synthetic(artifacts, (tmp.path / "fixtures").string());
  // Corrupt one batch file with a malformed separator.
  const fs::path victim = tmp.path / "fixtures" / "batches" / "batch-0001.txt";
  write_file(victim.string(), "==== CORRUPTED\n" + read_file(victim.string()));

  PipelineConfig config = config_for(tmp.path);
  config.out_dir = (tmp.path / "run").string();
  CHECK_THROWS_WITH_AS(run_pipeline(config), doctest::Contains("ingest:"), DataError);
}
