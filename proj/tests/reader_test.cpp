// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plfront/printer.hpp"
#include "plfront/reader.hpp"

using namespace plf;

namespace {

std::string read_canonical(std::string_view text) {
  Database db;
  std::vector<Diagnostic> diags;
  auto t = parse_term_text(text, db, &diags);
  if (!t) return "error:" + (diags.empty() ? std::string("?") : diags.front().code);
  return canonical(*t);
}

ParsedText read_all(std::string_view text) {
  Database db;
  return read_text(text, db);
}

}  // namespace

TEST_CASE("sentence kinds") {
  auto r = read_all("foo.\nf(X) :- g(X).\n:- dynamic(p/1).\nh --> a, b.\n?- true.\n");
  REQUIRE(r.sentences.size() == 5);
  CHECK(r.diagnostics.empty());
  CHECK(r.sentences[0].kind == SentenceKind::Fact);
  CHECK(r.sentences[0].term.is_atom("foo"));
  CHECK(r.sentences[1].kind == SentenceKind::Clause);
  CHECK(canonical(r.sentences[1].head()) == "f('$VAR'(0))");
  CHECK(canonical(r.sentences[1].body()) == "g('$VAR'(0))");
  CHECK(r.sentences[2].kind == SentenceKind::Directive);
  CHECK(canonical(r.sentences[2].goal()) == "dynamic(/(p,1))");
  CHECK(r.sentences[3].kind == SentenceKind::DcgRule);
  CHECK(r.sentences[3].head().is_atom("h"));
  CHECK(r.sentences[4].kind == SentenceKind::Fact);
  CHECK(r.sentences[0].body().is_atom("true"));
}

TEST_CASE("operator directive only helps after it is dispatched") {
  Database db;
  auto lexed = tokenize(":- op(700, xfx, ===). a === b.");
  Reader reader(lexed.tokens, {});
  auto first = reader.read_sentence(db);
  REQUIRE(first);
  REQUIRE(first->sentence);
  CHECK(first->sentence->kind == SentenceKind::Directive);
  Database copy = db;
  db.operators().add({"===", 700, Fixity::xfx});
  auto second = reader.read_sentence(db);
  REQUIRE(second);
  REQUIRE(second->sentence);
  CHECK(second->sentence->term.functor() == "===");
  CHECK(second->sentence->term.arity() == 2);

  Reader again(lexed.tokens, {});
  again.read_sentence(copy);
  auto undispatched = again.read_sentence(copy);
  REQUIRE(undispatched);
  CHECK_FALSE(undispatched->sentence);
  CHECK_FALSE(undispatched->diagnostics.empty());
}

TEST_CASE("precedence and associativity") {
  CHECK(read_canonical("a + b * c") == "+(a,*(b,c))");
  CHECK(read_canonical("a - b - c") == "-(-(a,b),c)");
  CHECK(read_canonical("a , b , c") == "','(a,','(b,c))");
  CHECK(read_canonical("2 ^ 3 ^ 4") == "^(2,^(3,4))");
  CHECK(read_canonical("- a * b") == "*(-(a),b)");
  CHECK(read_canonical("\\+ a, b") == "','(\\+(a),b)");
  CHECK(read_canonical("(a :- b, c ; d -> e)") == ":-(a,;(','(b,c),->(d,e)))");
  CHECK(read_canonical("f(a, b)") == "f(a,b)");
  CHECK(read_canonical("f((a, b))") == "f(','(a,b))");
  CHECK(read_canonical("[a|T]") == "'.'(a,'$VAR'(0))");
  CHECK(read_canonical("{a, b}") == "{}(','(a,b))");
  CHECK(read_canonical("- (1)") == "-(1)");
  CHECK(read_canonical("f(;, '|', '[]')") == "f(;,'|',[])");
}

TEST_CASE("negative numbers need adjacency") {
  Database db;
  auto spaced = parse_term_text("- 1", db);
  REQUIRE(spaced);
  CHECK(spaced->kind == TermKind::OpApply);
  CHECK(spaced->args[0].kind == TermKind::Int);
  auto folded = parse_term_text("-1", db);
  REQUIRE(folded);
  CHECK(folded->kind == TermKind::Int);
  CHECK(folded->int_value == -1);
  auto flt = parse_term_text("-2.5", db);
  REQUIRE(flt);
  CHECK(flt->kind == TermKind::Float);
  CHECK(read_canonical("a - 1") == "-(a,1)");
  CHECK(read_canonical("a-1") == "-(a,1)");
}

TEST_CASE("operators as atoms") {
  CHECK(read_canonical("X = +") == "=('$VAR'(0),+)");
  CHECK(read_canonical("f(+, -)") == "f(+,-)");
  CHECK(read_canonical("[-]") == "'.'(-,[])");
  CHECK(read_canonical("- (-)") == "-(-)");
  CHECK(read_canonical("\\+ (a)") == "\\+(a)");
}

TEST_CASE("priority clashes") {
  CHECK(read_canonical("a = b = c") == "error:operator_clash");
  CHECK(read_canonical("f(a :- b)") == "error:operator_clash");
  CHECK(read_canonical("X = \\+a") == "error:operator_clash");
  CHECK(read_canonical("foo bar").rfind("error:", 0) == 0);
}

TEST_CASE("recovery drops to the end token") {
  auto r = read_all("foo(. bar.");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].term.is_atom("bar"));
  CHECK(r.diagnostics.size() == 1);

  r = read_all("a(. b(. c.");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].term.is_atom("c"));
  CHECK(r.diagnostics.size() == 2);

  r = read_all("a. b :- c. d(1, 2).");
  CHECK(r.sentences.size() == 3);
  CHECK(r.diagnostics.empty());
}

TEST_CASE("distinct codes for distinct failures") {
  auto code = [](std::string_view text) {
    auto r = read_all(text);
    REQUIRE_FALSE(r.diagnostics.empty());
    return r.diagnostics.front().code;
  };
  CHECK(code("foo(a") == "unbalanced_delimiter");
  CHECK(code("foo") == "missing_end");
  CHECK(code("foo(a]. ") == "unbalanced_delimiter");
  CHECK(code("foo bar. ") == "syntax_error");
  CHECK(code("a = b = c. ") == "operator_clash");
}

TEST_CASE("diagnostic spans point at the offending token") {
  auto r = read_all("ok.\nfoo(a b).\n");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].span.start_line == 2);
  CHECK(r.diagnostics[0].span.start_col == 7);
}

TEST_CASE("term spans enclose their children") {
  Database db;
  auto r = read_text("f(X, [1, 2 | T], {a}) :- X = g(Y), Y is 1 + 2 * 3.", db);
  REQUIRE(r.sentences.size() == 1);
  bool ok = true;
  std::function<void(const Term&)> check = [&](const Term& t) {
    for (const Term& c : t.args) {
      if (!t.span.encloses(c.span)) ok = false;
      check(c);
    }
  };
  check(r.sentences[0].term);
  CHECK(ok);
  const Term& head = r.sentences[0].head();
  CHECK(head.name_span.length() == 1);
  CHECK(head.span.start_offset == 0);
}

TEST_CASE("variables are numbered per sentence and _ is always fresh") {
  auto r = read_all("f(X, Y, X, _, _). g(Y).");
  REQUIRE(r.sentences.size() == 2);
  CHECK(canonical(r.sentences[0].term) == "f('$VAR'(0),'$VAR'(1),'$VAR'(0),'$VAR'(2),'$VAR'(3))");
  CHECK(r.sentences[0].variable_count == 4);
  CHECK(r.sentences[1].term.args[0].var_id == 0);
}

TEST_CASE("leading comments are attached to the next sentence") {
  auto r = read_all("a.\n% one\n/* two */\nb.\n");
  REQUIRE(r.sentences.size() == 2);
  CHECK(r.sentences[0].leading_comments.empty());
  REQUIRE(r.sentences[1].leading_comments.size() == 2);
  CHECK(r.sentences[1].leading_comments[0].text == "% one");
}

TEST_CASE("double_quotes flag") {
  Database db;
  auto r = read_text("x(\"ab\").", db);
  CHECK(r.sentences[0].term.args[0].kind == TermKind::Str);
  db.set_flag("double_quotes", "codes");
  r = read_text("x(\"ab\").", db);
  CHECK(canonical(r.sentences[0].term) == "x('.'(97,'.'(98,[])))");
}

TEST_CASE("pretty printing") {
  Database db;
  auto show = [&](std::string_view text) {
    auto t = parse_term_text(text, db);
    REQUIRE(t);
    return pretty_print(*t, db);
  };
  CHECK(show("+(a, *(b, c))") == "a+b*c");
  CHECK(show("*(+(a, b), c)") == "(a+b)*c");
  CHECK(show("'hello world'") == "'hello world'");
  CHECK(show("[1,2]") == "[1,2]");
  CHECK(show("-(1)") == "-(1)");
  CHECK(show("-(-(1))") == "- -(1)");
  CHECK(show("- a") == "- a");
  CHECK(show("f(','(a, b))") == "f((a,b))");
  CHECK(show("[a|T]") == "[a|T]");
  CHECK(show("- (1)") == "-(1)");
  CHECK(show("-1") == "-1");
  CHECK(show("1 - -1") == "1- -1");
  CHECK(quote_atom("[]") == "[]");
  CHECK(quote_atom("it's") == "'it\\'s'");
  CHECK(quote_atom("aB") == "aB");
  CHECK(quote_atom("Ab") == "'Ab'");
  CHECK(format_float(1.0) == "1.0");
}

TEST_CASE("pretty_print output reads back") {
  Database db;
  for (std::string_view text :
       {"a :- b, c ; d -> e", "f(- 1, -1, - (1), a- -1, 1 - -1)", "X = (:-)", "[(a:-b), (c,d)]",
        "- (- a)", "\\+ \\+ a", "{a, b}", "'\\n' = \"x\\ty\"", "f((a;b), (c:-d))", "1.0e10 + 2.5",
        "(a , b) = c", "- (2 ^ 3)", "(- 2) ^ 3", "p :- \\+ (a, b)", "f(dynamic a)"}) {
    CAPTURE(text);
    auto t = parse_term_text(text, db);
    REQUIRE(t);
    std::string printed = pretty_print(*t, db);
    CAPTURE(printed);
    auto back = parse_term_text(printed, db);
    REQUIRE(back);
    CHECK(structurally_equal(*t, *back));
  }
}
