// SPDX-License-Identifier: Apache-2.0

#include "plfront/reader.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace plf {

namespace {

const OperatorDef kBarOp{"|", 1100, Fixity::xfy};

bool is_closer(TokenKind k) {
  return k == TokenKind::CloseParen || k == TokenKind::CloseBracket ||
         k == TokenKind::CloseBrace;
}

std::string describe(const Token* t) {
  if (t == nullptr) return "end of input";
  switch (t->kind) {
    case TokenKind::End: return "end of clause";
    case TokenKind::Invalid: return "invalid token";
    default: return "'" + t->text + "'";
  }
}

// Decodes one UTF-8 code point starting at s[i]; advances i.
std::int64_t next_code_point(std::string_view s, std::size_t& i) {
  const auto c = static_cast<unsigned char>(s[i]);
  int len = 1;
  std::int64_t cp = c;
  if (c >= 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else if (c >= 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if (c >= 0xC0) {
    len = 2;
    cp = c & 0x1F;
  }
  if (len == 1 || i + len > s.size()) {
    ++i;
    return c;
  }
  for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  i += len;
  return cp;
}

struct DepthGuard {
  explicit DepthGuard(int& d) : depth(d) { ++depth; }
  ~DepthGuard() { --depth; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;
  int& depth;
};

}  // namespace

std::string_view to_string(SentenceKind kind) {
  switch (kind) {
    case SentenceKind::Clause: return "clause";
    case SentenceKind::Directive: return "directive";
    case SentenceKind::DcgRule: return "dcg_rule";
    case SentenceKind::Fact: return "fact";
  }
  return "fact";
}

Term Sentence::head() const {
  switch (kind) {
    case SentenceKind::Clause:
      return term.arg(0);
    case SentenceKind::DcgRule: {
      Term h = term.arg(0);
      if (h.is(",", 2)) return h.arg(0);
      return h;
    }
    case SentenceKind::Fact:
      return term;
    case SentenceKind::Directive:
      break;
  }
  return Term::make_atom("true");
}

Term Sentence::body() const {
  if (kind == SentenceKind::Clause || kind == SentenceKind::DcgRule) return term.arg(1);
  return Term::make_atom("true", term.span);
}

Term Sentence::goal() const {
  if (kind == SentenceKind::Directive) return term.arg(0);
  return term;
}

Reader::Reader(const std::vector<Token>& tokens, FileId file) : tokens_(tokens), file_(file) {
  bool layout = false;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const Token& t = tokens_[i];
    if (t.is_layout_or_comment()) {
      layout = true;
      continue;
    }
    sig_.push_back(Sig{&t, i, layout});
    layout = false;
  }
}

bool Reader::at_end() const { return pos_ >= sig_.size(); }

const Token* Reader::peek(std::size_t ahead) const {
  return pos_ + ahead < sig_.size() ? sig_[pos_ + ahead].token : nullptr;
}

bool Reader::layout_before(std::size_t ahead) const {
  return pos_ + ahead < sig_.size() && sig_[pos_ + ahead].layout_before;
}

bool Reader::at_terminator() const {
  const Token* t = peek();
  if (t == nullptr) return true;
  switch (t->kind) {
    case TokenKind::End:
    case TokenKind::CloseParen:
    case TokenKind::CloseBracket:
    case TokenKind::CloseBrace:
    case TokenKind::Comma:
    case TokenKind::Bar:
      return true;
    default:
      return false;
  }
}

Reader::State Reader::save() const { return State{pos_, var_ids_, next_var_, error_index_, error_}; }

void Reader::restore(State s) {
  pos_ = s.pos;
  var_ids_ = std::move(s.vars);
  next_var_ = s.next_var;
  error_index_ = s.error_index;
  error_ = std::move(s.error);
}

SourceSpan Reader::span_at(std::size_t index) const {
  if (index < sig_.size()) return sig_[index].token->span;
  SourceSpan s;
  s.file = file_;
  if (!tokens_.empty()) {
    const SourceSpan& last = tokens_.back().span;
    s.start_offset = s.end_offset = last.end_offset;
    s.start_line = s.end_line = last.end_line;
    s.start_col = s.end_col = last.end_col;
  } else {
    s.start_line = s.end_line = 1;
    s.start_col = s.end_col = 1;
  }
  return s;
}

void Reader::fail(std::size_t index, std::string_view code, std::string message) {
  if (error_ && index <= error_index_) return;
  error_index_ = index;
  error_ = make_diagnostic(Severity::Error, code, std::move(message), span_at(index));
}

bool Reader::consume_end() {
  if (pos_ < sig_.size() && sig_[pos_].token->kind == TokenKind::End) {
    recover();
    return true;
  }
  return false;
}

void Reader::recover() {
  while (pos_ < sig_.size()) {
    const bool end = sig_[pos_].token->kind == TokenKind::End;
    ++pos_;
    if (end) {
      raw_after_end_ = sig_[pos_ - 1].raw + 1;
      return;
    }
  }
  raw_after_end_ = tokens_.size();
}

std::optional<ReadResult> Reader::read_sentence(const Database& db) {
  if (at_end()) return std::nullopt;
  db_ = &db;
  var_ids_.clear();
  next_var_ = 0;
  depth_ = 0;
  error_.reset();
  error_index_ = 0;

  ReadResult result;
  const std::size_t first = pos_;

  // The lexer already reported invalid tokens; do not pile a parse error on top.
  for (std::size_t i = pos_; i < sig_.size(); ++i) {
    const TokenKind k = sig_[i].token->kind;
    if (k == TokenKind::Invalid) {
      recover();
      return result;
    }
    if (k == TokenKind::End) break;
  }

  auto parsed = parse(1200);
  if (parsed) {
    const Token* t = peek();
    if (t != nullptr && t->kind == TokenKind::End) {
      Sentence s;
      s.term = std::move(parsed->term);
      s.end_span = t->span;
      s.span = join(sig_[first].token->span, t->span);
      s.variable_count = static_cast<std::size_t>(next_var_);
      for (std::size_t i = raw_after_end_; i < sig_[first].raw; ++i) {
        if (tokens_[i].is_comment()) s.leading_comments.push_back(tokens_[i]);
      }
      if (s.term.is(":-", 1)) {
        s.kind = SentenceKind::Directive;
      } else if (s.term.is(":-", 2)) {
        s.kind = SentenceKind::Clause;
      } else if (s.term.is("-->", 2)) {
        s.kind = SentenceKind::DcgRule;
      } else {
        s.kind = SentenceKind::Fact;
      }
      ++pos_;
      raw_after_end_ = sig_[pos_ - 1].raw + 1;
      result.sentence = std::move(s);
      return result;
    }
    if (t == nullptr) {
      fail(pos_, codes::kMissingEnd, "missing '.' at end of clause");
    } else if (is_closer(t->kind)) {
      fail(pos_, codes::kUnbalancedDelimiter, "unmatched " + describe(t));
    } else {
      fail(pos_, codes::kSyntaxError, "operator expected before " + describe(t));
    }
  }
  if (!error_) fail(pos_, codes::kSyntaxError, "unexpected " + describe(peek()));
  result.diagnostics.push_back(*error_);
  recover();
  return result;
}

std::optional<Term> Reader::parse_term(int max_priority, const Database& db) {
  db_ = &db;
  error_.reset();
  error_index_ = 0;
  auto parsed = parse(max_priority);
  if (!parsed) {
    if (!error_) fail(pos_, codes::kSyntaxError, "unexpected " + describe(peek()));
    return std::nullopt;
  }
  return std::move(parsed->term);
}

std::optional<Reader::Parsed> Reader::parse(int max) {
  auto left = parse_primary(max);
  if (!left) return std::nullopt;
  return parse_infix(std::move(*left), max);
}

std::optional<Reader::Parsed> Reader::parse_infix(Parsed left, int max) {
  while (const Token* t = peek()) {
    std::string name;
    if (t->kind == TokenKind::Comma) {
      name = ",";
    } else if (t->kind == TokenKind::Bar) {
      name = "|";
    } else if (t->is_atom()) {
      auto v = atom_value(*t);
      if (!v) break;
      name = std::move(*v);
    } else {
      break;
    }
    const bool separator = t->kind == TokenKind::Comma || t->kind == TokenKind::Bar;
    const OperatorDef* infix = t->kind == TokenKind::Bar ? &kBarOp : ops().infix(name);
    const OperatorDef* postfix = separator ? nullptr : ops().postfix(name);
    const OperatorDef* def = infix != nullptr ? infix : postfix;
    if (def == nullptr) break;
    if (def->priority > max || left.priority > def->left_max()) {
      if (!separator || def->priority <= max) {
        fail(pos_, codes::kOperatorClash,
             "operator priority clash at " + describe(t) + " (" + render_op(*def) + ")");
      }
      break;
    }
    const SourceSpan op_span = t->span;
    ++pos_;
    if (infix != nullptr) {
      auto right = parse(infix->right_max());
      if (!right) return std::nullopt;
      SourceSpan span = join(left.term.span, right->term.span);
      Term node = Term::make_op(*infix, {std::move(left.term), std::move(right->term)}, span);
      node.name_span = op_span;
      left = Parsed{std::move(node), infix->priority};
    } else {
      SourceSpan span = join(left.term.span, op_span);
      Term node = Term::make_op(*postfix, {std::move(left.term)}, span);
      node.name_span = op_span;
      left = Parsed{std::move(node), postfix->priority};
    }
  }
  return left;
}

std::optional<Reader::Parsed> Reader::parse_argument() {
  argument_ = true;
  return parse(999);
}

std::optional<Reader::Parsed> Reader::parse_primary(int max) {
  const bool argument = std::exchange(argument_, false);
  const Token* t = peek();
  if (t == nullptr) {
    if (depth_ > 0) {
      fail(pos_, codes::kUnbalancedDelimiter, "unclosed delimiter at end of input");
    } else {
      fail(pos_, codes::kMissingEnd, "unexpected end of input");
    }
    return std::nullopt;
  }
  switch (t->kind) {
    case TokenKind::Variable:
      ++pos_;
      return Parsed{make_variable(*t), 0};
    case TokenKind::Integer: {
      auto v = integer_value(t->text);
      if (!v) {
        fail(pos_, codes::kSyntaxError, "integer out of range: " + t->text);
        return std::nullopt;
      }
      ++pos_;
      return Parsed{Term::make_int(*v, t->span), 0};
    }
    case TokenKind::Float: {
      auto v = float_value(t->text);
      if (!v) {
        fail(pos_, codes::kSyntaxError, "malformed float: " + t->text);
        return std::nullopt;
      }
      ++pos_;
      return Parsed{Term::make_float(*v, t->span), 0};
    }
    case TokenKind::String:
      ++pos_;
      return Parsed{make_string(*t), 0};
    case TokenKind::OpenParen:
    case TokenKind::OpenParenCT: {
      auto inner = parse_parenthesized();
      if (!inner) return std::nullopt;
      return Parsed{std::move(*inner), 0};
    }
    case TokenKind::OpenBracket: {
      auto list = parse_list();
      if (!list) return std::nullopt;
      return Parsed{std::move(*list), 0};
    }
    case TokenKind::OpenBrace: {
      auto curly = parse_curly();
      if (!curly) return std::nullopt;
      return Parsed{std::move(*curly), 0};
    }
    case TokenKind::NameAtom:
    case TokenKind::QuotedAtom:
    case TokenKind::SymbolAtom:
    case TokenKind::SoloChar:
      return parse_atom(max, argument);
    case TokenKind::CloseParen:
    case TokenKind::CloseBracket:
    case TokenKind::CloseBrace:
      fail(pos_, codes::kUnbalancedDelimiter, "unexpected " + describe(t));
      return std::nullopt;
    case TokenKind::End:
      if (depth_ > 0) {
        fail(pos_, codes::kUnbalancedDelimiter, "unclosed delimiter before end of clause");
      } else {
        fail(pos_, codes::kSyntaxError, "unexpected end of clause");
      }
      return std::nullopt;
    default:
      fail(pos_, codes::kSyntaxError, "unexpected " + describe(t));
      return std::nullopt;
  }
}

std::optional<Reader::Parsed> Reader::parse_atom(int max, bool argument) {
  const std::size_t at = pos_;
  const Token* t = peek();
  auto value = atom_value(*t);
  if (!value) {
    fail(at, codes::kSyntaxError, "bad escape sequence in " + t->text);
    return std::nullopt;
  }
  std::string name = std::move(*value);
  ++pos_;

  const Token* next = peek();
  if (next != nullptr && next->kind == TokenKind::OpenParenCT) {
    auto compound = parse_arguments(Term::make_atom(name, t->span));
    if (!compound) return std::nullopt;
    return Parsed{std::move(*compound), 0};
  }

  // A minus sign glued to a number literal is part of the literal.
  if (name == "-" && t->kind == TokenKind::SymbolAtom && next != nullptr && !layout_before() &&
      (next->kind == TokenKind::Integer || next->kind == TokenKind::Float)) {
    const SourceSpan span = join(t->span, next->span);
    if (next->kind == TokenKind::Float) {
      auto v = float_value(next->text);
      if (!v) {
        fail(pos_, codes::kSyntaxError, "malformed float: " + next->text);
        return std::nullopt;
      }
      ++pos_;
      return Parsed{Term::make_float(-*v, span), 0};
    }
    std::int64_t n = 0;
    if (next->text == "9223372036854775808") {
      n = std::numeric_limits<std::int64_t>::min();
    } else {
      auto v = integer_value(next->text);
      if (!v) {
        fail(pos_, codes::kSyntaxError, "integer out of range: -" + next->text);
        return std::nullopt;
      }
      n = -*v;
    }
    ++pos_;
    return Parsed{Term::make_int(n, span), 0};
  }

  const bool is_op = ops().is_operator(name);
  const OperatorDef* prefix = ops().prefix(name);
  if (prefix != nullptr && !at_terminator()) {
    State before = save();
    int op_priority = prefix->priority;
    int arg_max = prefix->left_max();
    // Directly in an argument, prefix operators below 1200 are accepted and
    // take an argument of at most 999.
    if (argument && op_priority > max && op_priority < 1200) {
      op_priority = max;
      arg_max = std::min(arg_max, max);
    }
    if (op_priority <= max) {
      if (auto arg = parse(arg_max)) {
        SourceSpan span = join(t->span, arg->term.span);
        Term node = Term::make_op(*prefix, {std::move(arg->term)}, span);
        node.name_span = t->span;
        return Parsed{std::move(node), op_priority};
      }
    }
    // Not usable as a prefix operator here: fall back to the plain atom.
    State failed = save();
    restore(std::move(before));
    const int priority = ops().max_priority(name);
    if (priority <= max) return Parsed{Term::make_atom(name, t->span), priority};
    if (failed.error && failed.error_index > at + 1) {
      restore(std::move(failed));
      return std::nullopt;
    }
    fail(at, codes::kOperatorClash,
         "operator priority clash: " + render_op(*prefix) + " where priority " +
             std::to_string(max) + " is allowed");
    return std::nullopt;
  }

  const int priority = is_op && !at_terminator() ? ops().max_priority(name) : 0;
  if (priority > max) {
    fail(at, codes::kOperatorClash,
         "operator " + describe(t) + " needs parentheses where priority " + std::to_string(max) +
             " is allowed");
    return std::nullopt;
  }
  return Parsed{Term::make_atom(name, t->span), priority};
}

bool Reader::expect_close(TokenKind kind, std::string_view what) {
  const Token* t = peek();
  if (t != nullptr && t->kind == kind) {
    ++pos_;
    return true;
  }
  if (t == nullptr || t->kind == TokenKind::End || is_closer(t->kind)) {
    fail(pos_, codes::kUnbalancedDelimiter, "missing '" + std::string(what) + "' before " + describe(t));
  } else {
    fail(pos_, codes::kSyntaxError,
         "expected '" + std::string(what) + "' but found " + describe(t));
  }
  return false;
}

std::optional<Term> Reader::parse_arguments(Term functor) {
  DepthGuard guard(depth_);
  ++pos_;  // the '('
  std::vector<Term> args;
  while (true) {
    auto arg = parse_argument();
    if (!arg) return std::nullopt;
    args.push_back(std::move(arg->term));
    const Token* t = peek();
    if (t != nullptr && t->kind == TokenKind::Comma) {
      ++pos_;
      continue;
    }
    if (t != nullptr && t->kind == TokenKind::CloseParen) {
      const SourceSpan span = join(functor.span, t->span);
      ++pos_;
      Term node = Term::make_compound(functor.name, std::move(args), span);
      node.name_span = functor.span;
      return node;
    }
    if (t == nullptr || t->kind == TokenKind::End || is_closer(t->kind)) {
      fail(pos_, codes::kUnbalancedDelimiter, "missing ')' before " + describe(t));
    } else {
      fail(pos_, codes::kSyntaxError, "expected ',' or ')' but found " + describe(t));
    }
    return std::nullopt;
  }
}

std::optional<Term> Reader::parse_parenthesized() {
  DepthGuard guard(depth_);
  const SourceSpan open = peek()->span;
  ++pos_;
  auto inner = parse(1200);
  if (!inner) return std::nullopt;
  const Token* close = peek();
  if (!expect_close(TokenKind::CloseParen, ")")) return std::nullopt;
  Term term = std::move(inner->term);
  term.span = join(open, close->span);
  return term;
}

std::optional<Term> Reader::parse_list() {
  DepthGuard guard(depth_);
  const SourceSpan open = peek()->span;
  ++pos_;
  if (const Token* t = peek(); t != nullptr && t->kind == TokenKind::CloseBracket) {
    ++pos_;
    Term nil = Term::make_atom("[]", join(open, t->span));
    if (const Token* n = peek(); n != nullptr && n->kind == TokenKind::OpenParenCT) {
      return parse_arguments(std::move(nil));
    }
    return nil;
  }
  std::vector<Term> elements;
  std::optional<Term> tail;
  while (true) {
    auto element = parse_argument();
    if (!element) return std::nullopt;
    elements.push_back(std::move(element->term));
    const Token* t = peek();
    if (t != nullptr && t->kind == TokenKind::Comma) {
      ++pos_;
      continue;
    }
    if (t != nullptr && t->kind == TokenKind::Bar) {
      ++pos_;
      auto rest = parse_argument();
      if (!rest) return std::nullopt;
      tail = std::move(rest->term);
    }
    break;
  }
  const Token* close = peek();
  if (!expect_close(TokenKind::CloseBracket, "]")) return std::nullopt;
  return Term::make_list(std::move(elements), std::move(tail), join(open, close->span));
}

std::optional<Term> Reader::parse_curly() {
  DepthGuard guard(depth_);
  const SourceSpan open = peek()->span;
  ++pos_;
  if (const Token* t = peek(); t != nullptr && t->kind == TokenKind::CloseBrace) {
    ++pos_;
    Term empty = Term::make_atom("{}", join(open, t->span));
    if (const Token* n = peek(); n != nullptr && n->kind == TokenKind::OpenParenCT) {
      return parse_arguments(std::move(empty));
    }
    return empty;
  }
  auto inner = parse(1200);
  if (!inner) return std::nullopt;
  const Token* close = peek();
  if (!expect_close(TokenKind::CloseBrace, "}")) return std::nullopt;
  return Term::make_curly(std::move(inner->term), join(open, close->span));
}

Term Reader::make_variable(const Token& token) {
  if (token.text == "_") return Term::make_var("_", next_var_++, token.span);
  auto [it, inserted] = var_ids_.try_emplace(token.text, next_var_);
  if (inserted) ++next_var_;
  return Term::make_var(token.text, it->second, token.span);
}

Term Reader::make_string(const Token& token) {
  std::string text = decode_quoted(token.text).value_or("");
  const std::string mode = db_->flag("double_quotes").value_or("string");
  if (mode == "atom") return Term::make_atom(std::move(text), token.span);
  if (mode == "codes" || mode == "chars") {
    std::vector<Term> items;
    for (std::size_t i = 0; i < text.size();) {
      const std::size_t start = i;
      const std::int64_t cp = next_code_point(text, i);
      if (mode == "codes") {
        items.push_back(Term::make_int(cp, token.span));
      } else {
        items.push_back(Term::make_atom(text.substr(start, i - start), token.span));
      }
    }
    return Term::make_list(std::move(items), std::nullopt, token.span);
  }
  return Term::make_string(std::move(text), token.span);
}

ParsedText read_text(std::string_view text, Database& db, FileId file) {
  ParsedText out;
  LexResult lexed = tokenize(text, file);
  out.diagnostics = std::move(lexed.diagnostics);
  Reader reader(lexed.tokens, file);
  while (auto r = reader.read_sentence(db)) {
    for (auto& d : r->diagnostics) out.diagnostics.push_back(std::move(d));
    if (r->sentence) out.sentences.push_back(std::move(*r->sentence));
  }
  return out;
}

std::optional<Term> parse_term_text(std::string_view text, const Database& db,
                                    std::vector<Diagnostic>* diagnostics) {
  LexResult lexed = tokenize(text);
  for (const Token& t : lexed.tokens) {
    if (t.kind == TokenKind::Invalid) {
      if (diagnostics != nullptr) {
        for (auto& d : lexed.diagnostics) diagnostics->push_back(std::move(d));
      }
      return std::nullopt;
    }
  }
  Reader reader(lexed.tokens, FileId{});
  auto term = reader.parse_term(1200, db);
  if (term) {
    reader.consume_end();
    if (!reader.at_end()) term.reset();
  }
  if (!term && diagnostics != nullptr && reader.last_error()) {
    diagnostics->push_back(*reader.last_error());
  }
  return term;
}

}  // namespace plf
