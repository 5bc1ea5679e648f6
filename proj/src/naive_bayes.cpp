#include "emsi/naive_bayes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "emsi/error.hpp"
#include "emsi/rng.hpp"

namespace emsi {

std::string class_str(SentimentClass c) {
  switch (c) {
    case SentimentClass::Positive: return "positive";
    case SentimentClass::Negative: return "negative";
    case SentimentClass::Irrelevant: return "irrelevant";
  }
  return "?";
}

std::optional<SentimentClass> class_parse(const std::string& s) {
  if (s == "positive") return SentimentClass::Positive;
  if (s == "negative") return SentimentClass::Negative;
  if (s == "irrelevant") return SentimentClass::Irrelevant;
  return std::nullopt;
}

TrainCounts TrainCounts::accumulate(const std::vector<LabeledDoc>& docs, int vocab_size) {
  TrainCounts counts;
  counts.word_counts.assign(static_cast<size_t>(vocab_size), {});
  counts.total_docs = static_cast<int>(docs.size());
  for (const auto& doc : docs) {
    const int c = static_cast<int>(doc.label);
    counts.docs_per_class[static_cast<size_t>(c)] += 1;
    for (const auto& [word, n] : doc.doc.counts) {
      counts.word_counts[static_cast<size_t>(word)][static_cast<size_t>(c)] += n;
      counts.words_per_class[static_cast<size_t>(c)] += n;
    }
  }
  return counts;
}

double NbModel::conditional(int class_slot, int word) const {
  return std::exp(log_conditional(class_slot, word));
}

int NbModel::slot_of(SentimentClass c) const {
  for (size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i] == c) return static_cast<int>(i);
  }
  return -1;
}

bool NbModel::operator==(const NbModel& other) const {
  return classes_ == other.classes_ && log_prior_ == other.log_prior_ &&
         log_cond_ == other.log_cond_ && vocab_.words() == other.vocab_.words();
}

NbModel train(const std::vector<LabeledDoc>& docs, const Vocabulary& vocab) {
  if (docs.empty()) throw DataError("train: empty training set");
  if (vocab.size() == 0) throw DataError("train: empty vocabulary");

  const TrainCounts counts = TrainCounts::accumulate(docs, vocab.size());

  NbModel model;
  model.vocab_ = vocab;
  for (SentimentClass c : kClassOrder) {
    const int slot = static_cast<int>(c);
    if (counts.docs_per_class[static_cast<size_t>(slot)] == 0) {
      model.warnings_.push_back("class '" + class_str(c) +
                                "' has no training documents and is excluded from the model");
      continue;
    }
    model.classes_.push_back(c);
    model.log_prior_.push_back(
        std::log(static_cast<double>(counts.docs_per_class[static_cast<size_t>(slot)]) /
                 static_cast<double>(counts.total_docs)));
    // Add-one smoothing: (W_cw + 1) / (sum_t W_ct + |V|).
    const double denom = static_cast<double>(counts.words_per_class[static_cast<size_t>(slot)]) +
                         static_cast<double>(vocab.size());
    std::vector<double> conds(static_cast<size_t>(vocab.size()));
    for (int w = 0; w < vocab.size(); ++w) {
      const double num =
          static_cast<double>(counts.word_counts[static_cast<size_t>(w)][static_cast<size_t>(slot)]) + 1.0;
      conds[static_cast<size_t>(w)] = std::log(num / denom);
    }
    model.log_cond_.push_back(std::move(conds));
  }
  return model;
}

ClassifiedDoc classify(const NbModel& model, const DocVector& doc, const std::string& id) {
  const auto& classes = model.classes();
  ClassifiedDoc out;
  out.id = id;
  out.log_scores.resize(classes.size());

  for (size_t slot = 0; slot < classes.size(); ++slot) {
    double score = model.log_prior(static_cast<int>(slot));
    for (const auto& [word, n] : doc.counts) {
      score += n * model.log_conditional(static_cast<int>(slot), word);
    }
    out.log_scores[slot] = score;
  }

  size_t best = 0;
  for (size_t slot = 1; slot < classes.size(); ++slot) {
    if (out.log_scores[slot] > out.log_scores[best]) {
      best = slot;
    } else if (out.log_scores[slot] == out.log_scores[best] &&
               model.log_prior(static_cast<int>(slot)) > model.log_prior(static_cast<int>(best))) {
      best = slot;
    }
    // Remaining ties keep the earlier slot; classes_ is already in the
    // fixed (positive, negative, irrelevant) order.
  }
  out.predicted = classes[best];
  return out;
}

CvReport cross_validate(const std::vector<LabeledDoc>& docs, int k, std::uint64_t seed,
                        const Vocabulary& vocab) {
  if (k < 2) throw DataError("cross_validate: k must be at least 2");
  if (static_cast<size_t>(k) > docs.size()) {
    throw DataError("cross_validate: k exceeds the number of documents");
  }

  std::vector<int> order(docs.size());
  for (size_t i = 0; i < docs.size(); ++i) order[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(order);

  CvReport report;
  report.n = static_cast<int>(docs.size());
  int correct_total = 0;

  for (int fold = 0; fold < k; ++fold) {
    std::vector<LabeledDoc> train_docs;
    std::vector<int> held_out;
    for (size_t i = 0; i < order.size(); ++i) {
      if (static_cast<int>(i % static_cast<size_t>(k)) == fold) {
        held_out.push_back(order[i]);
      } else {
        train_docs.push_back(docs[static_cast<size_t>(order[i])]);
      }
    }
    const NbModel model = train(train_docs, vocab);
    int correct = 0;
    for (int idx : held_out) {
      const auto& doc = docs[static_cast<size_t>(idx)];
      const auto result = classify(model, doc.doc, doc.id);
      report.confusion[static_cast<size_t>(doc.label)][static_cast<size_t>(result.predicted)] += 1;
      if (result.predicted == doc.label) ++correct;
    }
    correct_total += correct;
    report.fold_accuracy.push_back(held_out.empty() ? 0.0
                                                    : static_cast<double>(correct) /
                                                          static_cast<double>(held_out.size()));
  }
  report.pooled_accuracy = static_cast<double>(correct_total) / static_cast<double>(docs.size());
  return report;
}

std::vector<WordDiff> discriminative_words(const NbModel& model, SentimentClass a,
                                           SentimentClass b, int n) {
  const int slot_a = model.slot_of(a);
  const int slot_b = model.slot_of(b);
  if (slot_a < 0 || slot_b < 0) throw DataError("discriminative_words: class not in model");

  const int v = model.vocabulary().size();
  std::vector<WordDiff> diffs(static_cast<size_t>(v));
  for (int w = 0; w < v; ++w) {
    auto& d = diffs[static_cast<size_t>(w)];
    d.word = w;
    d.text = model.vocabulary().word_of(w);
    d.p_a = model.conditional(slot_a, w);
    d.p_b = model.conditional(slot_b, w);
    d.diff = d.p_a - d.p_b;
  }
  std::stable_sort(diffs.begin(), diffs.end(), [](const WordDiff& x, const WordDiff& y) {
    if (x.diff != y.diff) return x.diff > y.diff;
    return x.word < y.word;
  });
  if (n < static_cast<int>(diffs.size())) diffs.resize(static_cast<size_t>(std::max(n, 0)));
  return diffs;
}

// ---------------------------------------------------------------------------
// Serialization: versioned little-endian binary, bit-exact round trip.

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'I', 'N', 'B', '0', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }
  void raw(char* dst, size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }
  void need(size_t n) {
    if (pos_ + n > bytes_.size()) throw DataError("model file truncated");
  }
  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string NbModel::serialize(const std::vector<std::pair<std::string, std::string>>& meta) const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(meta.size()));
  for (const auto& [key, value] : meta) {
    put_str(out, key);
    put_str(out, value);
  }
  put_u32(out, static_cast<std::uint32_t>(classes_.size()));
  for (SentimentClass c : classes_) out += static_cast<char>(c);
  put_u64(out, static_cast<std::uint64_t>(vocab_.size()));
  for (const auto& word : vocab_.words()) put_str(out, word);
  for (double lp : log_prior_) put_f64(out, lp);
  for (const auto& conds : log_cond_) {
    for (double lc : conds) put_f64(out, lc);
  }
  return out;
}

NbModel NbModel::deserialize(const std::string& bytes) {
  Reader reader(bytes);
  char magic[8];
  reader.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a model file (bad magic)");
  }
  const std::uint32_t meta_count = reader.u32();
  for (std::uint32_t i = 0; i < meta_count; ++i) {
    reader.str();
    reader.str();
  }
  NbModel model;
  const std::uint32_t n_classes = reader.u32();
  for (std::uint32_t i = 0; i < n_classes; ++i) {
    char c;
    reader.raw(&c, 1);
    if (c < 0 || c >= kNumClasses) throw DataError("model file: bad class id");
    model.classes_.push_back(static_cast<SentimentClass>(c));
  }
  const std::uint64_t vocab_size = reader.u64();
  for (std::uint64_t i = 0; i < vocab_size; ++i) model.vocab_.add(reader.str());
  if (model.vocab_.size() != static_cast<int>(vocab_size)) {
    throw DataError("model file: duplicate vocabulary entries");
  }
  for (std::uint32_t i = 0; i < n_classes; ++i) model.log_prior_.push_back(reader.f64());
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    std::vector<double> conds(vocab_size);
    for (std::uint64_t w = 0; w < vocab_size; ++w) conds[w] = reader.f64();
    model.log_cond_.push_back(std::move(conds));
  }
  if (!reader.done()) throw DataError("model file: trailing bytes");
  return model;
}

}  // namespace emsi
