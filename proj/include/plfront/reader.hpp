// SPDX-License-Identifier: Apache-2.0
//
// Sentence reader.
//
// The reader walks a token stream one sentence (clause or directive) at a
// time. Each call to read_sentence() consults the operator table of the
// database it is given *at that moment*, so a caller that dispatches every
// sentence before reading the next one gets the dynamic grammar: an op/3
// directive changes how the following sentences parse.
//
// Parsing is operator-precedence shift-reduce with one token of lookahead.
// An atom that has both a prefix and an infix/postfix definition is resolved
// by position: after a complete operand it is infix/postfix, otherwise it is
// tried as a prefix operator first and as a plain atom if that fails.
//
// On a syntax error the reader records one diagnostic, drops tokens up to
// and including the next end token, and resumes there.
//
// Usage:
//   auto lexed = plf::tokenize(text, file);
//   plf::Reader reader(lexed.tokens, file);
//   plf::Database db;
//   while (auto r = reader.read_sentence(db)) {
//     if (r->sentence) dispatch(*r->sentence, db);
//   }

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plfront/database.hpp"
#include "plfront/lexer.hpp"
#include "plfront/term.hpp"

namespace plf {

enum class SentenceKind { Clause, Directive, DcgRule, Fact };

std::string_view to_string(SentenceKind kind);

struct Sentence {
  SentenceKind kind = SentenceKind::Fact;
  Term term;
  SourceSpan span;      // first token through the end token
  SourceSpan end_span;  // the end token
  std::vector<Token> leading_comments;  // comments between the previous end and this sentence
  std::size_t variable_count = 0;

  /// Clause/Fact/DcgRule head (for DCG rules, pushback is stripped).
  [[nodiscard]] Term head() const;
  /// Clause/DcgRule body; `true` for facts.
  [[nodiscard]] Term body() const;
  /// Directive goal.
  [[nodiscard]] Term goal() const;
};

struct ReadResult {
  std::optional<Sentence> sentence;  // empty when the sentence was dropped
  std::vector<Diagnostic> diagnostics;
};

class Reader {
 public:
  /// `tokens` must outlive the reader.
  Reader(const std::vector<Token>& tokens, FileId file);

  /// Reads the next sentence using the live table of `db`. Returns nullopt at
  /// end of input. A dropped (malformed) sentence yields a result without a
  /// sentence and at least one diagnostic.
  std::optional<ReadResult> read_sentence(const Database& db);

  /// Parses one term of priority <= max_priority at the cursor, without
  /// expecting an end token. nullopt on error; see last_error().
  std::optional<Term> parse_term(int max_priority, const Database& db);

  /// Skips past the next end token (or to end of input).
  void recover();

  /// Consumes an end token at the cursor, if there is one.
  bool consume_end();

  [[nodiscard]] bool at_end() const;
  [[nodiscard]] std::size_t cursor() const { return pos_; }
  [[nodiscard]] const std::optional<Diagnostic>& last_error() const { return error_; }

 private:
  struct Sig {
    const Token* token;
    std::size_t raw;  // index into tokens_
    bool layout_before;
  };
  struct Parsed {
    Term term;
    int priority;
  };
  struct State {
    std::size_t pos;
    std::map<std::string, int> vars;
    int next_var;
    std::size_t error_index;
    std::optional<Diagnostic> error;
  };

  [[nodiscard]] const Token* peek(std::size_t ahead = 0) const;
  [[nodiscard]] bool layout_before(std::size_t ahead = 0) const;
  [[nodiscard]] bool at_terminator() const;
  [[nodiscard]] const OperatorTable& ops() const { return db_->operators(); }
  State save() const;
  void restore(State s);

  std::optional<Parsed> parse(int max);
  std::optional<Parsed> parse_primary(int max);
  std::optional<Parsed> parse_infix(Parsed left, int max);
  std::optional<Parsed> parse_atom(int max, bool argument);
  std::optional<Parsed> parse_argument();
  std::optional<Term> parse_arguments(Term functor);
  std::optional<Term> parse_list();
  std::optional<Term> parse_curly();
  std::optional<Term> parse_parenthesized();
  Term make_string(const Token& token);
  Term make_variable(const Token& token);
  bool expect_close(TokenKind kind, std::string_view what);

  // Records a failure at significant-token index `index` (sig_.size() means
  // end of input). The furthest failure of a sentence is the one reported.
  void fail(std::size_t index, std::string_view code, std::string message);
  [[nodiscard]] SourceSpan span_at(std::size_t index) const;

  const std::vector<Token>& tokens_;
  FileId file_;
  std::vector<Sig> sig_;
  std::size_t pos_ = 0;
  std::size_t raw_after_end_ = 0;
  std::size_t error_index_ = 0;
  std::optional<Diagnostic> error_;
  const Database* db_ = nullptr;
  std::map<std::string, int> var_ids_;
  int next_var_ = 0;
  int depth_ = 0;  // open delimiters
  bool argument_ = false;  // next primary starts a compound/list argument
};

/// Reads every sentence of `text` with a private database and no dispatch.
/// Mostly for tests and tools.
struct ParsedText {
  std::vector<Sentence> sentences;
  std::vector<Diagnostic> diagnostics;
};
ParsedText read_text(std::string_view text, Database& db, FileId file = {});

/// Parses a single term (no end token required) under `db`'s table.
std::optional<Term> parse_term_text(std::string_view text, const Database& db,
                                    std::vector<Diagnostic>* diagnostics = nullptr);

}  // namespace plf
