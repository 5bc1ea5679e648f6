#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emsi {

/// Ordered lowercase tokens of one document.
using TokenStream = std::vector<std::string>;

/// Lowercases and splits text into maximal runs of letters and digits.
/// Letters cover ASCII, Latin-1 and Latin Extended-A (enough for Swedish
/// text with å/ä/ö/é); anything else separates tokens. Single-character
/// tokens are dropped.
TokenStream tokenize(std::string_view text);

/// Word <-> dense index bijection in first-occurrence order.
class Vocabulary {
 public:
  /// Returns the index of `word`, inserting it if unseen.
  int add(const std::string& word);
  std::optional<int> lookup(const std::string& word) const;
  const std::string& word_of(int index) const { return words_[static_cast<size_t>(index)]; }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  /// Two-column CSV (index, word) for debugging.
  std::string to_csv() const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

Vocabulary build_vocabulary(const std::vector<TokenStream>& docs);

/// Bag-of-words counts against a fixed vocabulary. Entries are sorted by
/// index so downstream accumulation order is deterministic.
struct DocVector {
  std::vector<std::pair<int, int>> counts;  // (vocab index, count >= 1)
  int oov = 0;                              // tokens outside the vocabulary
  int total = 0;                            // n_d: all tokens including OOV
};

DocVector vectorize(const TokenStream& doc, const Vocabulary& vocab);

}  // namespace emsi
