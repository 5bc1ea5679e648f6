#pragma once

#include <memory>
#include <string>
#include <vector>

#include "emsi/corpus.hpp"
#include "emsi/text.hpp"

namespace emsi {

/// Expression tree over AND / OR / NOT / TERM. AND and OR hold two or more
/// children (same-operator chains are flattened), NOT exactly one. Terms
/// are quoted words or phrases matched case-insensitively against whole
/// tokens; phrases must appear as contiguous token runs.
struct QueryNode {
  enum class Kind { Term, And, Or, Not };

  Kind kind = Kind::Term;
  std::string term;                      // Kind::Term only, as written
  TokenStream phrase;                    // tokenized form used for matching
  std::vector<QueryNode> children;

  std::string str() const;  // canonical form, e.g. AND("a", OR("b", "c"))
};

struct BooleanQuery {
  QueryNode root;
  std::string str() const { return root.str(); }
};

/// Parses `"term"`, AND/OR/NOT (case-insensitive keywords) and parentheses
/// with precedence NOT > AND > OR. Throws DataError with the 1-based
/// character position on syntax errors.
BooleanQuery parse_query(const std::string& text);

bool matches(const BooleanQuery& query, const TokenStream& tokens);
bool matches(const BooleanQuery& query, const MediaItem& item);

Corpus filter_corpus(const Corpus& corpus, const BooleanQuery& query);

}  // namespace emsi
