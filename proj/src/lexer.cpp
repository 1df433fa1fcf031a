// SPDX-License-Identifier: Apache-2.0

#include "plfront/lexer.hpp"

#include <cctype>
#include <charconv>
#include <limits>

#include "plfront/operators.hpp"

namespace plf {

namespace {

bool is_layout(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_lower(char c) {
  return (c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0U) == 0xC0U) return 2;
  if ((lead & 0xF0U) == 0xE0U) return 3;
  if ((lead & 0xF8U) == 0xF0U) return 4;
  return 1;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::optional<std::uint32_t> first_code_point(std::string_view s, std::size_t* used) {
  if (s.empty()) return std::nullopt;
  const auto lead = static_cast<unsigned char>(s[0]);
  const std::size_t len = utf8_length(lead);
  if (len > s.size()) return std::nullopt;
  std::uint32_t cp = len == 1 ? lead : (lead & (0x7FU >> len));
  for (std::size_t i = 1; i < len; ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3FU);
  }
  *used = len;
  return cp;
}

// Length of the escape sequence starting at s[0] == '\\', or 0 if malformed.
std::size_t escape_length(std::string_view s) {
  if (s.size() < 2) return 0;
  const char e = s[1];
  if (e == 'x' || (e >= '0' && e <= '7')) {
    std::size_t i = e == 'x' ? 2 : 1;
    const std::size_t digits_start = i;
    while (i < s.size() && s[i] != '\\') {
      const char d = s[i];
      const bool ok = e == 'x' ? std::isxdigit(static_cast<unsigned char>(d)) != 0
                               : (d >= '0' && d <= '7');
      if (!ok) return 0;
      ++i;
    }
    if (i == s.size() || i == digits_start) return 0;
    return i + 1;
  }
  return 2;
}

class Scanner {
 public:
  Scanner(std::string_view source, FileId file)
      : src_(source), file_(file), lines_(source) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      scan_one();
    }
    return std::move(result_);
  }

 private:
  [[nodiscard]] char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void emit(TokenKind kind, std::size_t start, std::size_t end) {
    result_.tokens.push_back(
        Token{kind, std::string(src_.substr(start, end - start)), lines_.span(file_, start, end)});
    pos_ = end;
  }

  void emit_invalid(std::size_t start, std::size_t end, std::string message) {
    emit(TokenKind::Invalid, start, end);
    result_.diagnostics.push_back(make_diagnostic(Severity::Error, codes::kSyntaxError,
                                                  std::move(message),
                                                  result_.tokens.back().span));
  }

  [[nodiscard]] bool previous_is_functor() const {
    if (result_.tokens.empty()) return false;
    const Token& prev = result_.tokens.back();
    return prev.is_atom() || prev.kind == TokenKind::Variable;
  }

  void scan_one() {
    const std::size_t start = pos_;
    const char c = src_[pos_];

    if (is_layout(c)) {
      std::size_t i = pos_;
      while (i < src_.size() && is_layout(src_[i])) ++i;
      emit(TokenKind::Layout, start, i);
      return;
    }
    if (c == '%') {
      std::size_t i = pos_;
      while (i < src_.size() && src_[i] != '\n') ++i;
      emit(TokenKind::LineComment, start, i);
      return;
    }
    if (c == '/' && at(pos_ + 1) == '*') {
      const std::size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        emit_invalid(start, src_.size(), "unterminated block comment");
      } else {
        emit(TokenKind::BlockComment, start, close + 2);
      }
      return;
    }
    if (is_digit(c)) {
      scan_number();
      return;
    }
    if (c == '_' || (c >= 'A' && c <= 'Z')) {
      emit(TokenKind::Variable, start, alnum_run(pos_));
      return;
    }
    if (is_lower(c)) {
      emit(TokenKind::NameAtom, start, alnum_run(pos_));
      return;
    }
    if (c == '\'' || c == '"') {
      scan_quoted(c == '\'' ? TokenKind::QuotedAtom : TokenKind::String);
      return;
    }
    if (c == '`') {
      const std::size_t close = src_.find('`', pos_ + 1);
      const std::size_t end = close == std::string_view::npos ? src_.size() : close + 1;
      emit_invalid(start, end, "back-quoted strings are not supported");
      return;
    }
    if (is_symbol_char(c)) {
      std::size_t i = pos_;
      while (i < src_.size() && is_symbol_char(src_[i])) {
        if (i > pos_ && src_[i] == '/' && at(i + 1) == '*') break;
        ++i;
      }
      if (i == pos_ + 1 && c == '.') {
        const char next = at(i);
        if (i == src_.size() || is_layout(next) || next == '%') {
          emit(TokenKind::End, start, i);
          return;
        }
      }
      emit(TokenKind::SymbolAtom, start, i);
      return;
    }
    switch (c) {
      case '!':
      case ';':
        emit(TokenKind::SoloChar, start, pos_ + 1);
        return;
      case ',':
        emit(TokenKind::Comma, start, pos_ + 1);
        return;
      case '|':
        emit(TokenKind::Bar, start, pos_ + 1);
        return;
      case '(':
        emit(previous_is_functor() ? TokenKind::OpenParenCT : TokenKind::OpenParen, start,
             pos_ + 1);
        return;
      case ')':
        emit(TokenKind::CloseParen, start, pos_ + 1);
        return;
      case '[':
        emit(TokenKind::OpenBracket, start, pos_ + 1);
        return;
      case ']':
        emit(TokenKind::CloseBracket, start, pos_ + 1);
        return;
      case '{':
        emit(TokenKind::OpenBrace, start, pos_ + 1);
        return;
      case '}':
        emit(TokenKind::CloseBrace, start, pos_ + 1);
        return;
      default:
        break;
    }
    emit_invalid(start, start + utf8_length(static_cast<unsigned char>(c)),
                 "unexpected character");
  }

  [[nodiscard]] std::size_t alnum_run(std::size_t i) const {
    ++i;
    while (i < src_.size() && is_alnum_char(src_[i])) ++i;
    return i;
  }

  void scan_quoted(TokenKind kind) {
    const std::size_t start = pos_;
    const char quote = src_[pos_];
    std::size_t i = pos_ + 1;
    while (true) {
      if (i >= src_.size()) {
        emit_invalid(start, src_.size(),
                     kind == TokenKind::String ? "unterminated string" : "unterminated quoted atom");
        return;
      }
      const char c = src_[i];
      if (c == quote) {
        if (at(i + 1) == quote) {
          i += 2;
          continue;
        }
        ++i;
        break;
      }
      if (c == '\\') {
        i += 2;
        continue;
      }
      ++i;
    }
    if (!decode_quoted(src_.substr(start, i - start))) {
      emit_invalid(start, i, "undefined escape sequence");
      return;
    }
    emit(kind, start, i);
  }

  void scan_number() {
    const std::size_t start = pos_;
    if (src_[pos_] == '0' && pos_ + 1 < src_.size()) {
      const char k = src_[pos_ + 1];
      if (k == '\'') {
        scan_char_code();
        return;
      }
      auto based = [&](auto valid) {
        std::size_t i = pos_ + 2;
        while (i < src_.size() && valid(src_[i])) ++i;
        return i;
      };
      std::size_t end = start;
      if (k == 'x') {
        end = based([](char d) { return std::isxdigit(static_cast<unsigned char>(d)) != 0; });
      } else if (k == 'o') {
        end = based([](char d) { return d >= '0' && d <= '7'; });
      } else if (k == 'b') {
        end = based([](char d) { return d == '0' || d == '1'; });
      }
      if (end > start + 2) {
        finish_integer(start, end);
        return;
      }
    }
    std::size_t i = pos_;
    while (i < src_.size() && is_digit(src_[i])) ++i;
    bool is_float = false;
    if (at(i) == '.' && is_digit(at(i + 1))) {
      is_float = true;
      i += 1;
      while (i < src_.size() && is_digit(src_[i])) ++i;
      if (at(i) == 'e' || at(i) == 'E') {
        std::size_t j = i + 1;
        if (at(j) == '+' || at(j) == '-') ++j;
        if (is_digit(at(j))) {
          while (j < src_.size() && is_digit(src_[j])) ++j;
          i = j;
        }
      }
    }
    if (is_float) {
      emit(TokenKind::Float, start, i);
    } else {
      finish_integer(start, i);
    }
  }

  void scan_char_code() {
    const std::size_t start = pos_;
    std::size_t i = pos_ + 2;
    if (i >= src_.size()) {
      emit_invalid(start, src_.size(), "incomplete character code literal");
      return;
    }
    const char c = src_[i];
    if (c == '\\') {
      const std::size_t len = escape_length(src_.substr(i));
      if (len == 0 || !decode_quoted("'" + std::string(src_.substr(i, len)) + "'")) {
        emit_invalid(start, std::min(src_.size(), i + std::max<std::size_t>(len, 2)),
                     "undefined escape sequence");
        return;
      }
      i += len;
    } else if (c == '\'') {
      i += at(i + 1) == '\'' ? 2 : 1;
    } else {
      i += utf8_length(static_cast<unsigned char>(c));
    }
    finish_integer(start, std::min(i, src_.size()));
  }

  void finish_integer(std::size_t start, std::size_t end) {
    if (!integer_value(src_.substr(start, end - start))) {
      emit_invalid(start, end, "integer literal out of range");
      return;
    }
    emit(TokenKind::Integer, start, end);
  }

  std::string_view src_;
  FileId file_;
  LineIndex lines_;
  std::size_t pos_ = 0;
  LexResult result_;
};

}  // namespace

bool is_symbol_char(char c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '\\': case '^': case '<': case '>':
    case '=': case '~': case ':': case '.': case '?': case '@': case '#': case '&':
    case '$':
      return true;
    default:
      return false;
  }
}

bool is_alnum_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::NameAtom: return "NameAtom";
    case TokenKind::QuotedAtom: return "QuotedAtom";
    case TokenKind::SymbolAtom: return "SymbolAtom";
    case TokenKind::SoloChar: return "SoloChar";
    case TokenKind::Variable: return "Variable";
    case TokenKind::Integer: return "Integer";
    case TokenKind::Float: return "Float";
    case TokenKind::String: return "String";
    case TokenKind::OpenParen: return "OpenParen";
    case TokenKind::OpenParenCT: return "OpenParenCT";
    case TokenKind::CloseParen: return "CloseParen";
    case TokenKind::OpenBracket: return "OpenBracket";
    case TokenKind::CloseBracket: return "CloseBracket";
    case TokenKind::OpenBrace: return "OpenBrace";
    case TokenKind::CloseBrace: return "CloseBrace";
    case TokenKind::Comma: return "Comma";
    case TokenKind::Bar: return "Bar";
    case TokenKind::End: return "End";
    case TokenKind::LineComment: return "LineComment";
    case TokenKind::BlockComment: return "BlockComment";
    case TokenKind::Layout: return "Layout";
    case TokenKind::Invalid: return "Invalid";
  }
  return "Invalid";
}

std::string_view to_string(TokenRole role) {
  switch (role) {
    case TokenRole::Operand: return "Operand";
    case TokenRole::PrefixOp: return "PrefixOp";
    case TokenRole::InfixOp: return "InfixOp";
    case TokenRole::PostfixOp: return "PostfixOp";
    case TokenRole::Ambiguous: return "Ambiguous";
  }
  return "Operand";
}

LexResult tokenize(std::string_view source, FileId file) {
  return Scanner(source, file).run();
}

std::optional<std::string> decode_quoted(std::string_view quoted) {
  if (quoted.size() < 2) return std::nullopt;
  const char quote = quoted.front();
  const std::string_view body = quoted.substr(1, quoted.size() - 2);
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size();) {
    const char c = body[i];
    if (c == quote) {
      if (i + 1 < body.size() && body[i + 1] == quote) {
        out.push_back(quote);
        i += 2;
        continue;
      }
      return std::nullopt;
    }
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 >= body.size()) return std::nullopt;
    const char e = body[i + 1];
    switch (e) {
      case 'n': out.push_back('\n'); i += 2; continue;
      case 't': out.push_back('\t'); i += 2; continue;
      case 'r': out.push_back('\r'); i += 2; continue;
      case 'a': out.push_back('\a'); i += 2; continue;
      case 'b': out.push_back('\b'); i += 2; continue;
      case 'f': out.push_back('\f'); i += 2; continue;
      case 'v': out.push_back('\v'); i += 2; continue;
      case 'e': out.push_back('\x1b'); i += 2; continue;
      case 's': out.push_back(' '); i += 2; continue;
      case '\\': case '\'': case '"': case '`':
        out.push_back(e);
        i += 2;
        continue;
      case '\n':
        i += 2;
        continue;
      default:
        break;
    }
    const std::size_t len = escape_length(body.substr(i));
    if (len == 0 || (e != 'x' && !(e >= '0' && e <= '7'))) return std::nullopt;
    const std::size_t digits_start = i + (e == 'x' ? 2 : 1);
    const std::string_view digits = body.substr(digits_start, i + len - 1 - digits_start);
    std::uint32_t code = 0;
    const auto res =
        std::from_chars(digits.data(), digits.data() + digits.size(), code, e == 'x' ? 16 : 8);
    if (res.ec != std::errc{} || code > 0x10FFFF) return std::nullopt;
    append_utf8(out, code);
    i += len;
  }
  return out;
}

std::optional<std::string> atom_value(const Token& token) {
  if (token.kind == TokenKind::QuotedAtom) return decode_quoted(token.text);
  if (token.kind == TokenKind::Comma) return std::string(",");
  if (token.kind == TokenKind::Bar) return std::string("|");
  return token.text;
}

std::optional<std::int64_t> integer_value(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && text[1] == '\'') {
    const std::string_view rest = text.substr(2);
    std::string decoded;
    if (rest == "'" || rest == "''") {
      return std::int64_t{'\''};
    }
    if (!rest.empty() && rest[0] == '\\') {
      auto d = decode_quoted("'" + std::string(rest) + "'");
      if (!d) return std::nullopt;
      decoded = *d;
    } else {
      decoded = std::string(rest);
    }
    std::size_t used = 0;
    auto cp = first_code_point(decoded, &used);
    if (!cp || used != decoded.size()) return std::nullopt;
    return static_cast<std::int64_t>(*cp);
  }
  int base = 10;
  std::string_view digits = text;
  if (text.size() > 2 && text[0] == '0') {
    switch (text[1]) {
      case 'x': base = 16; digits = text.substr(2); break;
      case 'o': base = 8; digits = text.substr(2); break;
      case 'b': base = 2; digits = text.substr(2); break;
      default: break;
    }
  }
  std::int64_t value = 0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::optional<double> float_value(std::string_view text) {
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

TokenRole classify(const Token& token, const OperatorTable& table) {
  if (token.kind == TokenKind::Comma || token.kind == TokenKind::Bar) {
    return TokenRole::InfixOp;
  }
  if (!token.is_atom()) return TokenRole::Operand;
  const auto name = atom_value(token);
  if (!name) return TokenRole::Operand;
  const bool prefix = table.prefix(*name) != nullptr;
  const bool infix = table.infix(*name) != nullptr;
  const bool postfix = table.postfix(*name) != nullptr;
  if (prefix && (infix || postfix)) return TokenRole::Ambiguous;
  if (prefix) return TokenRole::PrefixOp;
  if (infix) return TokenRole::InfixOp;
  if (postfix) return TokenRole::PostfixOp;
  return TokenRole::Operand;
}

}  // namespace plf
