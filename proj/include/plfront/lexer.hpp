// SPDX-License-Identifier: Apache-2.0
//
// Lossless tokenizer for ISO Prolog text.
//
// tokenize() is context free: it never consults the operator table. Every
// byte of the input ends up in exactly one token, including layout and
// comments, so concatenating the token texts reproduces the source. Whether
// an atom acts as an operator is decided later by classify(), which the
// reader calls against the table that is live at that point of the file.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plfront/source.hpp"

namespace plf {

class OperatorTable;

enum class TokenKind {
  NameAtom,     // foo, fooBar, x_1
  QuotedAtom,   // 'hello world'
  SymbolAtom,   // +, =.., :-
  SoloChar,     // ! ;
  Variable,     // X, _foo, _
  Integer,      // 42, 0'a, 0x1F
  Float,        // 1.5e10
  String,       // "text"
  OpenParen,    // ( preceded by layout or a non-name token
  OpenParenCT,  // ( directly after a name or variable: functional notation
  CloseParen,
  OpenBracket,
  CloseBracket,
  OpenBrace,
  CloseBrace,
  Comma,
  Bar,
  End,  // clause terminator
  LineComment,
  BlockComment,
  Layout,
  Invalid,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Invalid;
  std::string text;
  SourceSpan span;

  [[nodiscard]] bool is_atom() const {
    return kind == TokenKind::NameAtom || kind == TokenKind::QuotedAtom ||
           kind == TokenKind::SymbolAtom || kind == TokenKind::SoloChar;
  }
  [[nodiscard]] bool is_layout_or_comment() const {
    return kind == TokenKind::Layout || kind == TokenKind::LineComment ||
           kind == TokenKind::BlockComment;
  }
  [[nodiscard]] bool is_comment() const {
    return kind == TokenKind::LineComment || kind == TokenKind::BlockComment;
  }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

/// Splits `source` into tokens. Never fails; malformed input becomes
/// Invalid tokens, each with one diagnostic.
LexResult tokenize(std::string_view source, FileId file = {});

/// Role an atom-like token can play given the current operator table.
enum class TokenRole { Operand, PrefixOp, InfixOp, PostfixOp, Ambiguous };

std::string_view to_string(TokenRole role);

TokenRole classify(const Token& token, const OperatorTable& table);

/// Value of an atom token: the decoded text of a quoted atom, the verbatim
/// text otherwise. Returns nullopt for a quoted atom with a bad escape.
std::optional<std::string> atom_value(const Token& token);

/// Decodes the body of a quoted item ('...', "...") including escapes and
/// doubled quotes. `quoted` must include the surrounding quote characters.
std::optional<std::string> decode_quoted(std::string_view quoted);

/// Numeric value of an Integer token (decimal, 0x/0o/0b, 0'c). nullopt on
/// overflow.
std::optional<std::int64_t> integer_value(std::string_view text);

std::optional<double> float_value(std::string_view text);

bool is_symbol_char(char c);
bool is_alnum_char(char c);

}  // namespace plf
