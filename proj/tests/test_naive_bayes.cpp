#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "emsi/error.hpp"
#include "emsi/naive_bayes.hpp"
#include "emsi/rng.hpp"
#include "emsi/text.hpp"

using namespace emsi;

namespace {

struct ToyModel {
  Vocabulary vocab;
  std::vector<LabeledDoc> docs;
  NbModel model;
};

// Two positive documents ("good growth", "strong growth"), one negative
// ("weak recession"): |V| = 5, all conditional probabilities tractable by
// hand from the add-one formulas.
ToyModel toy() {
  ToyModel t;
  const std::vector<std::pair<std::string, SentimentClass>> raw = {
      {"good growth", SentimentClass::Positive},
      {"strong growth", SentimentClass::Positive},
      {"weak recession", SentimentClass::Negative},
  };
  std::vector<TokenStream> streams;
  for (const auto& [text, label] : raw) streams.push_back(tokenize(text));
  t.vocab = build_vocabulary(streams);
  for (size_t i = 0; i < raw.size(); ++i) {
    t.docs.push_back({"d" + std::to_string(i), vectorize(streams[i], t.vocab), raw[i].second});
  }
  t.model = train(t.docs, t.vocab);
  return t;
}

DocVector vec(const std::string& text, const Vocabulary& vocab) {
  return vectorize(tokenize(text), vocab);
}

}  // namespace

TEST_CASE("hand-computed training probabilities") {
  const ToyModel t = toy();
  REQUIRE(t.model.classes().size() == 2);
  const int pos = t.model.slot_of(SentimentClass::Positive);
  const int neg = t.model.slot_of(SentimentClass::Negative);

  CHECK(std::exp(t.model.log_prior(pos)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(t.model.log_prior(neg)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const int growth = *t.vocab.lookup("growth");
  const int good = *t.vocab.lookup("good");
  CHECK(t.model.conditional(pos, growth) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(t.model.conditional(neg, good) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(t.model.conditional(pos, good) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));

  CHECK(classify(t.model, vec("good growth", t.vocab)).predicted == SentimentClass::Positive);
  CHECK(classify(t.model, vec("weak recession", t.vocab)).predicted ==
        SentimentClass::Negative);
}

TEST_CASE("single class, single document") {
  Vocabulary vocab = build_vocabulary({{"aa", "bb"}});
  std::vector<LabeledDoc> docs = {{"d0", vectorize({"aa", "bb"}, vocab), SentimentClass::Positive}};
  const NbModel model = train(docs, vocab);
  REQUIRE(model.classes().size() == 1);
  CHECK(std::exp(model.log_prior(0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.conditional(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.conditional(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.warnings().size() == 2);  // negative and irrelevant absent
}

TEST_CASE("per-class conditionals sum to one") {
  const ToyModel t = toy();
  for (size_t slot = 0; slot < t.model.classes().size(); ++slot) {
    double sum = 0.0;
    for (int w = 0; w < t.vocab.size(); ++w) {
      sum += t.model.conditional(static_cast<int>(slot), w);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  double prior_sum = 0.0;
  for (size_t slot = 0; slot < t.model.classes().size(); ++slot) {
    prior_sum += std::exp(t.model.log_prior(static_cast<int>(slot)));
  }
  CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("train errors") {
  Vocabulary vocab = build_vocabulary({{"aa"}});
  CHECK_THROWS_AS(train({}, vocab), DataError);
  CHECK_THROWS_AS(train({{"d", DocVector{}, SentimentClass::Positive}}, Vocabulary{}), DataError);
}

TEST_CASE("empty or all-oov document falls back to the prior") {
  const ToyModel t = toy();
  const ClassifiedDoc empty = classify(t.model, DocVector{});
  CHECK(empty.predicted == SentimentClass::Positive);  // prior 2/3 wins
  const ClassifiedDoc oov = classify(t.model, vec("okänt ord", t.vocab));
  CHECK(oov.predicted == SentimentClass::Positive);
  CHECK(oov.log_scores == empty.log_scores);
}

TEST_CASE("ties break toward the fixed class order") {
  // One document per class, one shared word: equal priors and equal
  // conditionals everywhere.
  Vocabulary vocab = build_vocabulary({{"xx", "ww"}, {"yy", "ww"}});
  std::vector<LabeledDoc> docs = {
      {"p", vectorize({"xx", "ww"}, vocab), SentimentClass::Positive},
      {"n", vectorize({"yy", "ww"}, vocab), SentimentClass::Negative},
  };
  const NbModel model = train(docs, vocab);
  const ClassifiedDoc c = classify(model, vectorize({"ww"}, vocab));
  REQUIRE(c.log_scores.size() == 2);
  CHECK(c.log_scores[0] == c.log_scores[1]);
  CHECK(c.predicted == SentimentClass::Positive);
}

TEST_CASE("token permutation leaves scores bit-identical") {
  const ToyModel t = toy();
  Rng rng(4242);
  const std::vector<std::string> words = {"good", "growth", "strong", "weak",
                                          "recession", "unknown"};
  for (int trial = 0; trial < 1000; ++trial) {
    TokenStream doc;
    const int len = 1 + static_cast<int>(rng.below(24));
    for (int i = 0; i < len; ++i) doc.push_back(words[rng.below(words.size())]);
    TokenStream shuffled = doc;
    rng.shuffle(shuffled);

    const ClassifiedDoc a = classify(t.model, vectorize(doc, t.vocab));
    const ClassifiedDoc b = classify(t.model, vectorize(shuffled, t.vocab));
    REQUIRE(a.log_scores == b.log_scores);
    REQUIRE(a.predicted == b.predicted);
  }
}

TEST_CASE("duplicating the training set keeps priors and relative frequencies") {
  const ToyModel t = toy();
  std::vector<LabeledDoc> doubled = t.docs;
  for (auto doc : t.docs) {
    doc.id += "-copy";
    doubled.push_back(doc);
  }
  const NbModel model2 = train(doubled, t.vocab);
  for (size_t slot = 0; slot < t.model.classes().size(); ++slot) {
    CHECK(model2.log_prior(static_cast<int>(slot)) == t.model.log_prior(static_cast<int>(slot)));
  }
  // The unsmoothed relative frequencies W_cw / sum_t W_ct are exactly
  // invariant; the add-one estimates only converge toward them.
  const TrainCounts once = TrainCounts::accumulate(t.docs, t.vocab.size());
  const TrainCounts twice = TrainCounts::accumulate(doubled, t.vocab.size());
  for (int w = 0; w < t.vocab.size(); ++w) {
    for (int c = 0; c < kNumClasses; ++c) {
      if (once.words_per_class[static_cast<size_t>(c)] == 0) continue;
      const double f1 = static_cast<double>(once.word_counts[static_cast<size_t>(w)][static_cast<size_t>(c)]) /
                        static_cast<double>(once.words_per_class[static_cast<size_t>(c)]);
      const double f2 = static_cast<double>(twice.word_counts[static_cast<size_t>(w)][static_cast<size_t>(c)]) /
                        static_cast<double>(twice.words_per_class[static_cast<size_t>(c)]);
      CHECK(f1 == f2);
    }
  }
}

TEST_CASE("vocabulary extension by an unseen word preserves argmax") {
  // Balanced class word totals: the denominator rescaling from an unused
  // vocabulary entry is then identical across classes, so every decision
  // boundary is preserved (scores all shift, argmax does not).
  std::vector<TokenStream> streams = {
      tokenize("good growth strong"), tokenize("good profit boom"),
      tokenize("weak recession slump"), tokenize("weak crisis losses"),
  };
  Vocabulary vocab = build_vocabulary(streams);
  std::vector<LabeledDoc> docs;
  for (size_t i = 0; i < streams.size(); ++i) {
    docs.push_back({"d" + std::to_string(i), vectorize(streams[i], vocab),
                    i < 2 ? SentimentClass::Positive : SentimentClass::Negative});
  }
  const NbModel base = train(docs, vocab);

  Vocabulary extended = vocab;
  extended.add("spök");
  std::vector<LabeledDoc> redocs;
  for (size_t i = 0; i < streams.size(); ++i) {
    redocs.push_back({docs[i].id, vectorize(streams[i], extended), docs[i].label});
  }
  const NbModel wider = train(redocs, extended);

  Rng rng(515);
  std::vector<std::string> words = vocab.words();
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TokenStream doc;
    const int len = 1 + static_cast<int>(rng.below(12));
    for (int i = 0; i < len; ++i) doc.push_back(words[rng.below(words.size())]);
    const auto before = classify(base, vectorize(doc, vocab));
    const auto after = classify(wider, vectorize(doc, extended));
    // Score differences between classes are what the extension preserves.
    const double margin_before = before.log_scores[0] - before.log_scores[1];
    const double margin_after = after.log_scores[0] - after.log_scores[1];
    CHECK(std::abs(margin_before - margin_after) < 1e-9);
    // Exact ties depend on the tie-break, not on the extension; skip them.
    if (std::abs(margin_before) < 1e-9) continue;
    ++checked;
    CHECK(before.predicted == after.predicted);
  }
  CHECK(checked > 200);
}

TEST_CASE("appending a word shifts the score by its log conditional") {
  const ToyModel t = toy();
  const TokenStream base = {"good", "weak", "growth"};
  const ClassifiedDoc before = classify(t.model, vectorize(base, t.vocab));
  for (const std::string& w : {"growth", "recession"}) {
    TokenStream extended = base;
    extended.push_back(w);
    const ClassifiedDoc after = classify(t.model, vectorize(extended, t.vocab));
    for (size_t slot = 0; slot < t.model.classes().size(); ++slot) {
      const double expected =
          before.log_scores[slot] +
          t.model.log_conditional(static_cast<int>(slot), *t.vocab.lookup(w));
      CHECK(after.log_scores[slot] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("priors reproduce a 31/29/40 class split exactly") {
  Vocabulary vocab = build_vocabulary({{"ww"}});
  std::vector<LabeledDoc> docs;
  auto add = [&](int n, SentimentClass c) {
    for (int i = 0; i < n; ++i) {
      docs.push_back({"d" + std::to_string(docs.size()), vectorize({"ww"}, vocab), c});
    }
  };
  add(31, SentimentClass::Positive);
  add(29, SentimentClass::Negative);
  add(40, SentimentClass::Irrelevant);
  const NbModel model = train(docs, vocab);
  CHECK(std::abs(std::exp(model.log_prior(model.slot_of(SentimentClass::Positive))) - 0.31) <
        1e-12);
  CHECK(std::abs(std::exp(model.log_prior(model.slot_of(SentimentClass::Negative))) - 0.29) <
        1e-12);
  CHECK(std::abs(std::exp(model.log_prior(model.slot_of(SentimentClass::Irrelevant))) - 0.40) <
        1e-12);
}

TEST_CASE("discriminative words: hand oracle and full-sort oracle") {
  const ToyModel t = toy();
  const auto top = discriminative_words(t.model, SentimentClass::Positive,
                                        SentimentClass::Negative, 1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].text == "growth");
  CHECK(top[0].diff == doctest::Approx(1.0 / 3.0 - 1.0 / 7.0).epsilon(1e-12));

  // a = b: all differences zero, ranking falls back to vocabulary order.
  const auto same = discriminative_words(t.model, SentimentClass::Positive,
                                         SentimentClass::Positive, 3);
  REQUIRE(same.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(same[static_cast<size_t>(i)].word == i);
    CHECK(same[static_cast<size_t>(i)].diff == 0.0);
  }

  // n larger than |V| truncates.
  CHECK(discriminative_words(t.model, SentimentClass::Positive, SentimentClass::Negative, 99)
            .size() == static_cast<size_t>(t.vocab.size()));

  // Independent full-sort oracle on a random corpus.
  Rng rng(31);
  Vocabulary vocab;
  for (int i = 0; i < 60; ++i) vocab.add("w" + std::to_string(i));
  std::vector<LabeledDoc> docs;
  for (int d = 0; d < 80; ++d) {
    TokenStream tokens;
    const int len = 3 + static_cast<int>(rng.below(20));
    for (int i = 0; i < len; ++i) tokens.push_back("w" + std::to_string(rng.below(60)));
    const auto label = static_cast<SentimentClass>(rng.below(3));
    docs.push_back({"d" + std::to_string(d), vectorize(tokens, vocab), label});
  }
  const NbModel model = train(docs, vocab);
  const int pos = model.slot_of(SentimentClass::Positive);
  const int neg = model.slot_of(SentimentClass::Negative);
  std::vector<std::pair<double, int>> oracle;
  for (int w = 0; w < vocab.size(); ++w) {
    oracle.emplace_back(model.conditional(pos, w) - model.conditional(neg, w), w);
  }
  std::stable_sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const auto ranked =
      discriminative_words(model, SentimentClass::Positive, SentimentClass::Negative, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(ranked[static_cast<size_t>(i)].word == oracle[static_cast<size_t>(i)].second);
  }
}

TEST_CASE("model serialization round trip is bit-exact") {
  const ToyModel t = toy();
  const std::string bytes = t.model.serialize({{"tool", "test"}, {"seed", "1"}});
  const NbModel loaded = NbModel::deserialize(bytes);
  CHECK(loaded == t.model);
  CHECK(loaded.serialize({{"tool", "test"}, {"seed", "1"}}) == bytes);
  CHECK_THROWS_AS(NbModel::deserialize("garbage"), DataError);
}

TEST_CASE("cross validation on a separable corpus reaches accuracy 1") {
  Rng rng(7);
  Vocabulary vocab;
  const char* prefixes[3] = {"pp", "nn", "ii"};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 10; ++i) vocab.add(prefixes[c] + std::to_string(i));
  }
  std::vector<LabeledDoc> docs;
  for (int c = 0; c < 3; ++c) {
    for (int d = 0; d < 30; ++d) {
      TokenStream tokens;
      for (int i = 0; i < 6; ++i) {
        tokens.push_back(prefixes[c] + std::to_string(rng.below(10)));
      }
      docs.push_back({"d" + std::to_string(docs.size()), vectorize(tokens, vocab),
                      static_cast<SentimentClass>(c)});
    }
  }
  const CvReport report = cross_validate(docs, 5, 99, vocab);
  CHECK(report.pooled_accuracy == 1.0);
}

TEST_CASE("cross validation on shuffled labels sits near chance") {
  Vocabulary vocab;
  for (int i = 0; i < 30; ++i) vocab.add("w" + std::to_string(i));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed * 1000 + 17);
    std::vector<SentimentClass> labels;
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 100; ++i) labels.push_back(static_cast<SentimentClass>(c));
    }
    rng.shuffle(labels);
    std::vector<LabeledDoc> docs;
    for (int d = 0; d < 300; ++d) {
      TokenStream tokens;
      const int len = 4 + static_cast<int>(rng.below(10));
      for (int i = 0; i < len; ++i) tokens.push_back("w" + std::to_string(rng.below(30)));
      docs.push_back({"d" + std::to_string(d), vectorize(tokens, vocab),
                      labels[static_cast<size_t>(d)]});
    }
    const CvReport report = cross_validate(docs, 5, seed, vocab);
    CHECK(std::abs(report.pooled_accuracy - 1.0 / 3.0) <= 0.1);
  }
}

TEST_CASE("leave-one-out predicts every document exactly once") {
  Rng rng(11);
  Vocabulary vocab;
  for (int i = 0; i < 12; ++i) vocab.add("w" + std::to_string(i));
  std::vector<LabeledDoc> docs;
  for (int d = 0; d < 24; ++d) {
    TokenStream tokens;
    for (int i = 0; i < 5; ++i) tokens.push_back("w" + std::to_string(rng.below(12)));
    docs.push_back({"d" + std::to_string(d), vectorize(tokens, vocab),
                    static_cast<SentimentClass>(d % 3)});
  }
  const CvReport report = cross_validate(docs, static_cast<int>(docs.size()), 3, vocab);
  int total = 0;
  for (const auto& row : report.confusion) {
    for (int cell : row) total += cell;
  }
  CHECK(total == static_cast<int>(docs.size()));
  CHECK(report.fold_accuracy.size() == docs.size());
}

TEST_CASE("cross validation rejects bad fold counts") {
  Vocabulary vocab = build_vocabulary({{"ww"}});
  std::vector<LabeledDoc> docs = {{"a", vectorize({"ww"}, vocab), SentimentClass::Positive},
                                  {"b", vectorize({"ww"}, vocab), SentimentClass::Negative}};
  CHECK_THROWS_AS(cross_validate(docs, 1, 0, vocab), DataError);
  CHECK_THROWS_AS(cross_validate(docs, 3, 0, vocab), DataError);
}
