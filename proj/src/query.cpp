#include "emsi/query.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "emsi/error.hpp"

namespace emsi {
namespace {

struct Token {
  enum class Kind { Term, And, Or, Not, LParen, RParen, End };
  Kind kind;
  std::string text;
  size_t pos;  // 1-based character position
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    const size_t pos = i_ + 1;
    if (i_ >= src_.size()) return {Token::Kind::End, "", pos};
    const char c = src_[i_];
    if (c == '(') {
      ++i_;
      return {Token::Kind::LParen, "(", pos};
    }
    if (c == ')') {
      ++i_;
      return {Token::Kind::RParen, ")", pos};
    }
    if (c == '"') {
      ++i_;
      std::string term;
      while (i_ < src_.size() && src_[i_] != '"') term += src_[i_++];
      if (i_ >= src_.size()) throw DataError("query: unterminated quote at position " + std::to_string(pos));
      ++i_;
      if (term.empty()) throw DataError("query: empty term at position " + std::to_string(pos));
      return {Token::Kind::Term, term, pos};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (i_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[i_]))) {
        word += static_cast<char>(std::toupper(static_cast<unsigned char>(src_[i_])));
        ++i_;
      }
      if (word == "AND") return {Token::Kind::And, word, pos};
      if (word == "OR") return {Token::Kind::Or, word, pos};
      if (word == "NOT") return {Token::Kind::Not, word, pos};
      throw DataError("query: unquoted word at position " + std::to_string(pos) +
                      " (terms must be quoted)");
    }
    throw DataError("query: unexpected character '" + std::string(1, c) + "' at position " +
                    std::to_string(pos));
  }

 private:
  const std::string& src_;
  size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) { advance(); }

  QueryNode parse() {
    QueryNode node = parse_or();
    if (current_.kind != Token::Kind::End) {
      throw DataError("query: unexpected token '" + current_.text + "' at position " +
                      std::to_string(current_.pos));
    }
    return node;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  QueryNode parse_or() {
    QueryNode first = parse_and();
    if (current_.kind != Token::Kind::Or) return first;
    QueryNode node;
    node.kind = QueryNode::Kind::Or;
    node.children.push_back(std::move(first));
    while (current_.kind == Token::Kind::Or) {
      advance();
      node.children.push_back(parse_and());
    }
    return node;
  }

  QueryNode parse_and() {
    QueryNode first = parse_not();
    if (current_.kind != Token::Kind::And) return first;
    QueryNode node;
    node.kind = QueryNode::Kind::And;
    node.children.push_back(std::move(first));
    while (current_.kind == Token::Kind::And) {
      advance();
      node.children.push_back(parse_not());
    }
    return node;
  }

  QueryNode parse_not() {
    if (current_.kind == Token::Kind::Not) {
      const size_t pos = current_.pos;
      advance();
      QueryNode node;
      node.kind = QueryNode::Kind::Not;
      if (current_.kind == Token::Kind::End) {
        throw DataError("query: dangling NOT at position " + std::to_string(pos));
      }
      node.children.push_back(parse_not());
      return node;
    }
    return parse_primary();
  }

  QueryNode parse_primary() {
    if (current_.kind == Token::Kind::LParen) {
      const size_t pos = current_.pos;
      advance();
      QueryNode inner = parse_or();
      if (current_.kind != Token::Kind::RParen) {
        throw DataError("query: unbalanced parenthesis opened at position " + std::to_string(pos));
      }
      advance();
      return inner;
    }
    if (current_.kind == Token::Kind::Term) {
      QueryNode node;
      node.kind = QueryNode::Kind::Term;
      node.term = current_.text;
      node.phrase = tokenize(current_.text);
      advance();
      return node;
    }
    throw DataError("query: expected term or '(' at position " + std::to_string(current_.pos) +
                    (current_.kind == Token::Kind::End ? " (dangling operator)" : ""));
  }

  Lexer lexer_;
  Token current_{Token::Kind::End, "", 0};
};

bool contains_phrase(const TokenStream& tokens, const TokenStream& phrase) {
  if (phrase.empty()) return false;  // e.g. a term of only 1-char tokens
  if (phrase.size() == 1) {
    return std::find(tokens.begin(), tokens.end(), phrase[0]) != tokens.end();
  }
  if (phrase.size() > tokens.size()) return false;
  for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<long>(i))) {
      return true;
    }
  }
  return false;
}

bool eval(const QueryNode& node, const TokenStream& tokens) {
  switch (node.kind) {
    case QueryNode::Kind::Term:
      return contains_phrase(tokens, node.phrase);
    case QueryNode::Kind::Not:
      return !eval(node.children[0], tokens);
    case QueryNode::Kind::And:
      for (const auto& child : node.children) {
        if (!eval(child, tokens)) return false;
      }
      return true;
    case QueryNode::Kind::Or:
      for (const auto& child : node.children) {
        if (eval(child, tokens)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

std::string QueryNode::str() const {
  switch (kind) {
    case Kind::Term:
      return "\"" + term + "\"";
    case Kind::Not:
      return "NOT(" + children[0].str() + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out = (kind == Kind::And) ? "AND(" : "OR(";
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) out += ", ";
        out += children[i].str();
      }
      return out + ")";
    }
  }
  return "";
}

BooleanQuery parse_query(const std::string& text) {
  Parser parser(text);
  return BooleanQuery{parser.parse()};
}

bool matches(const BooleanQuery& query, const TokenStream& tokens) {
  return eval(query.root, tokens);
}

bool matches(const BooleanQuery& query, const MediaItem& item) {
  return matches(query, tokenize(item.text()));
}

Corpus filter_corpus(const Corpus& corpus, const BooleanQuery& query) {
  return corpus.filtered([&](const MediaItem& item) { return matches(query, item); });
}

}  // namespace emsi
