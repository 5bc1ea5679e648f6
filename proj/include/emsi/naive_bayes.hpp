#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emsi/text.hpp"

namespace emsi {

enum class SentimentClass : std::uint8_t { Positive = 0, Negative = 1, Irrelevant = 2 };
inline constexpr int kNumClasses = 3;
inline constexpr std::array<SentimentClass, 3> kClassOrder = {
    SentimentClass::Positive, SentimentClass::Negative, SentimentClass::Irrelevant};

std::string class_str(SentimentClass c);
std::optional<SentimentClass> class_parse(const std::string& s);

struct LabeledDoc {
  std::string id;
  DocVector doc;
  SentimentClass label = SentimentClass::Irrelevant;
};

/// Sufficient statistics of a training set: document and word counts per
/// class. All estimation reads from here.
struct TrainCounts {
  int total_docs = 0;
  std::array<int, kNumClasses> docs_per_class{};
  std::vector<std::array<std::int64_t, kNumClasses>> word_counts;  // [word][class]
  std::array<std::int64_t, kNumClasses> words_per_class{};

  static TrainCounts accumulate(const std::vector<LabeledDoc>& docs, int vocab_size);
};

/// Trained multinomial model with add-one smoothing, stored in log space.
/// Classes absent from the training data are not present in the model.
class NbModel {
 public:
  const std::vector<SentimentClass>& classes() const { return classes_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  double log_prior(int class_slot) const { return log_prior_[static_cast<size_t>(class_slot)]; }
  double log_conditional(int class_slot, int word) const {
    return log_cond_[static_cast<size_t>(class_slot)][static_cast<size_t>(word)];
  }
  /// Conditional probability (not log) of a word given a class slot.
  double conditional(int class_slot, int word) const;
  int slot_of(SentimentClass c) const;  // -1 when the class is not in the model

  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string serialize(const std::vector<std::pair<std::string, std::string>>& meta = {}) const;
  static NbModel deserialize(const std::string& bytes);

  bool operator==(const NbModel& other) const;

 private:
  friend NbModel train(const std::vector<LabeledDoc>&, const Vocabulary&);

  std::vector<SentimentClass> classes_;
  std::vector<double> log_prior_;               // per class slot
  std::vector<std::vector<double>> log_cond_;   // [class slot][word]
  Vocabulary vocab_;
  std::vector<std::string> warnings_;
};

NbModel train(const std::vector<LabeledDoc>& docs, const Vocabulary& vocab);

struct ClassifiedDoc {
  std::string id;
  SentimentClass predicted = SentimentClass::Irrelevant;
  std::vector<double> log_scores;  // aligned with model.classes()
};

/// MAP classification in log space. Repeated words contribute once per
/// occurrence; out-of-vocabulary words are ignored. Ties go to the higher
/// prior, then to the earlier class in (positive, negative, irrelevant).
ClassifiedDoc classify(const NbModel& model, const DocVector& doc, const std::string& id = "");

struct CvReport {
  int n = 0;
  double pooled_accuracy = 0.0;
  std::array<std::array<int, kNumClasses>, kNumClasses> confusion{};  // [true][predicted]
  std::vector<double> fold_accuracy;
};

/// Seeded k-fold cross validation: one shuffle, folds of near-equal size,
/// each document held out exactly once. Accuracy is pooled over all
/// held-out predictions.
CvReport cross_validate(const std::vector<LabeledDoc>& docs, int k, std::uint64_t seed,
                        const Vocabulary& vocab);

struct WordDiff {
  int word = 0;
  std::string text;
  double p_a = 0.0;
  double p_b = 0.0;
  double diff = 0.0;
};

/// Top-n words by conditional probability difference P(w|a) - P(w|b),
/// descending; ties resolved by vocabulary index.
std::vector<WordDiff> discriminative_words(const NbModel& model, SentimentClass a,
                                           SentimentClass b, int n);

}  // namespace emsi
