#include "emsi/text.hpp"

#include <algorithm>

#include "emsi/csv.hpp"

namespace emsi {
namespace {

// Decodes one UTF-8 code point at `i`, advancing `i`. Invalid sequences
// decode as U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, size_t& i) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<size_t>(len) > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const unsigned char b = static_cast<unsigned char>(s[i + static_cast<size_t>(k)]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<size_t>(len);
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_token_char(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9')) return true;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1 letters
  if (cp >= 0x100 && cp <= 0x17F) return true;                            // Latin Extended-A
  return false;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F) {
    switch (cp) {
      case 0x130: return 'i';    // İ
      case 0x178: return 0xFF;   // Ÿ -> ÿ
      case 0x131: case 0x138: case 0x149: case 0x17F: return cp;  // already lowercase
      default: break;
    }
    if (cp <= 0x137 || cp >= 0x14A) return (cp % 2 == 0) ? cp + 1 : cp;  // even = upper
    return (cp % 2 == 1) ? cp + 1 : cp;  // 0x139..0x148: odd = upper
  }
  return cp;
}

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream tokens;
  std::string current;
  int current_len = 0;  // code points

  auto flush = [&]() {
    if (current_len >= 2) tokens.push_back(current);
    current.clear();
    current_len = 0;
  };

  size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (is_token_char(cp)) {
      encode_utf8(to_lower(cp), current);
      ++current_len;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

int Vocabulary::add(const std::string& word) {
  auto [it, inserted] = index_.try_emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

std::optional<int> Vocabulary::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_csv() const {
  CsvWriter w;
  w.row({"index", "word"});
  for (size_t i = 0; i < words_.size(); ++i) {
    w.row({std::to_string(i), words_[i]});
  }
  return w.str();
}

Vocabulary build_vocabulary(const std::vector<TokenStream>& docs) {
  Vocabulary vocab;
  for (const auto& doc : docs) {
    for (const auto& token : doc) vocab.add(token);
  }
  return vocab;
}

DocVector vectorize(const TokenStream& doc, const Vocabulary& vocab) {
  DocVector vec;
  vec.total = static_cast<int>(doc.size());
  std::unordered_map<int, int> counts;
  for (const auto& token : doc) {
    if (auto idx = vocab.lookup(token)) {
      ++counts[*idx];
    } else {
      ++vec.oov;
    }
  }
  vec.counts.assign(counts.begin(), counts.end());
  std::sort(vec.counts.begin(), vec.counts.end());
  return vec;
}

}  // namespace emsi
