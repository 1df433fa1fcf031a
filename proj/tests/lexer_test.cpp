// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "plfront/lexer.hpp"
#include "plfront/operators.hpp"

using namespace plf;

namespace {

std::vector<TokenKind> kinds(std::string_view text) {
  std::vector<TokenKind> out;
  for (const Token& t : tokenize(text).tokens) out.push_back(t.kind);
  return out;
}

std::string joined(const std::vector<Token>& tokens) {
  std::string s;
  for (const Token& t : tokens) s += t.text;
  return s;
}

Token atom_token(std::string text) {
  Token t;
  t.kind = TokenKind::SymbolAtom;
  t.text = std::move(text);
  return t;
}

}  // namespace

TEST_CASE("compound with arguments") {
  using K = TokenKind;
  CHECK(kinds("foo(X, 1).") == std::vector<K>{K::NameAtom, K::OpenParenCT, K::Variable, K::Comma,
                                               K::Layout, K::Integer, K::CloseParen, K::End});
}

TEST_CASE("functional notation needs the paren to touch the name") {
  using K = TokenKind;
  CHECK(kinds("f (x)")[2] == K::OpenParen);
  CHECK(kinds("f(x)")[1] == K::OpenParenCT);
  CHECK(kinds("X(")[1] == K::OpenParenCT);
  CHECK(kinds("1(")[1] == K::OpenParen);
}

TEST_CASE("character code literal") {
  auto r = tokenize("0'a");
  REQUIRE(r.tokens.size() == 1);
  CHECK(r.tokens[0].kind == TokenKind::Integer);
  CHECK(integer_value(r.tokens[0].text) == 97);
  CHECK(integer_value("0'\\n") == 10);
  CHECK(integer_value("0'''") == 39);
  CHECK(integer_value("0x1F") == 31);
  CHECK(integer_value("0o17") == 15);
  CHECK(integer_value("0b101") == 5);
}

TEST_CASE("comments and layout are kept") {
  using K = TokenKind;
  CHECK(kinds("X=1. % note") ==
        std::vector<K>{K::Variable, K::SymbolAtom, K::Integer, K::End, K::Layout, K::LineComment});
  CHECK(kinds("/* a */ b")[0] == K::BlockComment);
}

TEST_CASE("end token needs layout, comment or end of input after the dot") {
  using K = TokenKind;
  CHECK(kinds("a.")[1] == K::End);
  CHECK(kinds("a.%c")[1] == K::End);
  CHECK(kinds("a.b")[1] == K::SymbolAtom);
  CHECK(kinds("X = '.'.")[4] == K::QuotedAtom);
}

TEST_CASE("negative numbers are a minus followed by a number") {
  using K = TokenKind;
  CHECK(kinds("-1") == std::vector<K>{K::SymbolAtom, K::Integer});
  CHECK(kinds("1.5e10")[0] == K::Float);
  CHECK(kinds("1.e")[0] == K::Integer);
}

TEST_CASE("atoms, strings and solo characters") {
  using K = TokenKind;
  CHECK(kinds("'hello world'") == std::vector<K>{K::QuotedAtom});
  CHECK(kinds("\"text\"") == std::vector<K>{K::String});
  CHECK(kinds("! ;") == std::vector<K>{K::SoloChar, K::Layout, K::SoloChar});
  CHECK(kinds("[]{}|") == std::vector<K>{K::OpenBracket, K::CloseBracket, K::OpenBrace,
                                          K::CloseBrace, K::Bar});
  CHECK(atom_value(tokenize("'it''s'").tokens[0]) == "it's");
  CHECK(decode_quoted("'a\\tb'") == "a\tb");
  CHECK(decode_quoted("'\\x41\\'") == "A");
}

TEST_CASE("unterminated items become one invalid token with a diagnostic") {
  for (std::string_view text : {"'abc", "\"abc", "/* abc", "x = 'abc\n  def"}) {
    CAPTURE(text);
    auto r = tokenize(text);
    REQUIRE_FALSE(r.tokens.empty());
    CHECK(r.tokens.back().kind == TokenKind::Invalid);
    CHECK(r.diagnostics.size() == 1);
    CHECK(joined(r.tokens) == text);
  }
}

TEST_CASE("back-quoted text is invalid") {
  auto r = tokenize("`abc`");
  CHECK(r.tokens[0].kind == TokenKind::Invalid);
  CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("spans carry lines and code point columns") {
  auto r = tokenize("a.\n  'ä' b");
  const Token& q = r.tokens[3];
  CHECK(q.text == "'ä'");
  CHECK(q.span.start_line == 2);
  CHECK(q.span.start_col == 3);
  CHECK(q.span.end_col == 6);
  CHECK(r.tokens[5].span.start_col == 7);
}

TEST_CASE("tokenizing is lossless and spans do not overlap") {
  std::mt19937 rng(1234);
  const std::string alphabet = "abXY_09 \n\t.,;|!()[]{}'\"%/*+-=\\:#0x`";
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    std::size_t len = rng() % 40;
    for (std::size_t k = 0; k < len; ++k) text += alphabet[rng() % alphabet.size()];
    CAPTURE(text);
    auto r = tokenize(text);
    REQUIRE(joined(r.tokens) == text);
    std::size_t offset = 0;
    for (const Token& t : r.tokens) {
      REQUIRE(t.span.start_offset == offset);
      REQUIRE(t.span.end_offset == offset + t.text.size());
      offset = t.span.end_offset;
    }
    std::size_t invalid = 0;
    for (const Token& t : r.tokens) invalid += t.kind == TokenKind::Invalid;
    REQUIRE(invalid == r.diagnostics.size());
  }
}

TEST_CASE("classify follows the live operator table") {
  OperatorTable table = OperatorTable::standard();
  CHECK(classify(atom_token("+"), table) == TokenRole::Ambiguous);
  CHECK(classify(atom_token("-"), table) == TokenRole::Ambiguous);
  CHECK(classify(atom_token("*"), table) == TokenRole::InfixOp);
  CHECK(classify(atom_token("\\+"), table) == TokenRole::PrefixOp);
  Token foo;
  foo.kind = TokenKind::NameAtom;
  foo.text = "foo";
  CHECK(classify(foo, table) == TokenRole::Operand);

  table.add({"+", 0, Fixity::yfx});
  CHECK(classify(atom_token("+"), table) == TokenRole::PrefixOp);
  table.remove_all("+");
  CHECK(classify(atom_token("+"), table) == TokenRole::Operand);

  table.add({"foo", 100, Fixity::xf});
  CHECK(classify(foo, table) == TokenRole::PostfixOp);

  Token num;
  num.kind = TokenKind::Integer;
  num.text = "1";
  CHECK(classify(num, table) == TokenRole::Operand);
}
