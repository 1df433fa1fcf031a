// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "plfront/engine.hpp"
#include "support.hpp"

using namespace plf;
using plf::test::TempDir;

namespace {

struct Consulted {
  Database db;
  ConsultResult result;
  LoadContext ctx;
};

std::vector<std::string> codes_of(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const Diagnostic& d : diags) out.push_back(d.code);
  return out;
}

// Counts every sentence it sees and records the operator table state.
class Counter : public EngineHandler {
 public:
  explicit Counter(std::vector<std::string>& seen) : seen_(seen) {}
  void handle(const Sentence& s, Database& db, LoadContext&, std::vector<Diagnostic>&) override {
    seen_.push_back(std::string(to_string(s.kind)) +
                    (db.operators().infix("===") != nullptr ? "+op" : ""));
  }

 private:
  std::vector<std::string>& seen_;
};

std::string run_repl(const std::string& input) {
  Database db;
  std::istringstream in(input);
  std::ostringstream out;
  CHECK(repl(db, in, out) == 0);
  return out.str();
}

}  // namespace

TEST_CASE("directives run before the next sentence is read") {
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  auto r = consult_text(":- op(700, xfx, ===).\na === b.\n", db, chain, ctx);
  CHECK(r.diagnostics.empty());
  REQUIRE(r.sentences.size() == 2);
  CHECK(db.lookup({"===", 2}) != nullptr);
  REQUIRE(ctx.operators.size() == 1);
  CHECK(ctx.operators[0].def == OperatorDef{"===", 700, Fixity::xfx});
}

TEST_CASE("every handler sees every sentence in order") {
  std::vector<std::string> seen;
  EngineChain chain;
  chain.add(std::make_unique<DirectiveEngine>());
  chain.add(std::make_unique<Counter>(seen));
  chain.add(std::make_unique<StorageEngine>());
  CHECK(chain.size() == 3);
  Database db;
  LoadContext ctx;
  auto r = consult_text("a === b.\n:- op(700, xfx, ===).\nc === d.\nbad(.\nf(1).\ns --> t.\n", db,
                        chain, ctx);
  CHECK(r.sentences.size() == 4);
  CHECK(seen == std::vector<std::string>{"directive+op", "fact+op", "fact+op", "dcg_rule+op"});
  CHECK(codes_of(r.diagnostics) ==
        std::vector<std::string>{"syntax_error", "unbalanced_delimiter"});
}

TEST_CASE("an operator directive affects later sentences only") {
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  auto r = consult_text("x(a === b).\n:- op(700, xfx, ===).\ny(a === b).\n", db, chain, ctx);
  REQUIRE(r.sentences.size() == 2);
  CHECK(r.sentences[0].kind == SentenceKind::Directive);
  CHECK(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].span.start_line == 1);
}

TEST_CASE("facts, clauses and grammar rules are stored") {
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  consult_text("foo(1).\nbar(X) :- foo(X).\ngreeting --> [hello], name.\n", db, chain, ctx);
  REQUIRE(db.lookup({"foo", 1}) != nullptr);
  CHECK(db.lookup({"foo", 1})->clauses.size() == 1);
  CHECK(db.lookup({"bar", 1}) != nullptr);
  const PredicateEntry* g = db.lookup({"greeting", 2});
  REQUIRE(g != nullptr);
  CHECK(g->properties.dcg);
}

TEST_CASE("module and dynamic directives") {
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  auto r = consult_text(":- module(m, [f/1, s//0]).\n:- dynamic((p/1, q/2)).\n"
                        ":- discontiguous r/0.\n:- set_prolog_flag(double_quotes, codes).\n",
                        db, chain, ctx);
  CHECK(r.diagnostics.empty());
  REQUIRE(db.module());
  CHECK(db.module()->name == "m");
  CHECK(db.module()->exports ==
        std::set<PredicateIndicator>{PredicateIndicator("f", 1), PredicateIndicator("s", 2)});
  CHECK(db.lookup({"p", 1})->properties.dynamic);
  CHECK(db.lookup({"q", 2})->properties.dynamic);
  CHECK(db.lookup({"r", 0})->properties.discontiguous);
  CHECK(db.flag("double_quotes") == "codes");
}

TEST_CASE("unknown and malformed directives") {
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  auto r = consult_text(":- initialization(main).\n:- op(foo, xfx, bar).\n:- op(700, abc, bar).\n"
                        ":- op(1300, xfx, bar).\n:- dynamic(foo).\nok.\n",
                        db, chain, ctx);
  REQUIRE(r.diagnostics.size() == 5);
  CHECK(r.diagnostics[0].code == "unknown_directive");
  CHECK(r.diagnostics[0].severity == Severity::Warning);
  for (std::size_t i = 1; i < 5; ++i) {
    CAPTURE(i);
    CHECK(r.diagnostics[i].severity == Severity::Error);
    CHECK(r.diagnostics[i].code == "directive_error");
  }
  // The offending sub-term is underlined, not the whole directive.
  CHECK(r.diagnostics[1].span.start_col == 7);
  CHECK(db.lookup({"ok", 0}) != nullptr);
}

TEST_CASE("use_module of a missing file does not stop the chain") {
  TempDir dir;
  dir.write("a.pl", ":- use_module(missing_file).\nf(1).\n");
  Loader loader;
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  ctx.file = dir / "a.pl";
  ctx.loader = &loader;
  auto r = consult_text(plf::test::read_file(ctx.file), db, chain, ctx);
  CHECK(codes_of(r.diagnostics) == std::vector<std::string>{"file_not_found"});
  CHECK(db.lookup({"f", 1}) != nullptr);
}

TEST_CASE("libraries resolve against the library path") {
  TempDir dir;
  dir.write("lib/mylib.pl", ":- module(mylib, [thing/1, op(200, xfy, ~~)]).\nthing(1).\n");
  dir.write("a.pl", ":- use_module(library(mylib)).\n:- use_module(library(nolib)).\nx(a ~~ b).\n");
  Loader loader({dir / "lib"});
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  ctx.file = dir / "a.pl";
  ctx.loader = &loader;
  auto r = consult_text(plf::test::read_file(ctx.file), db, chain, ctx);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "unresolved_import");
  CHECK(r.diagnostics[0].severity == Severity::Warning);
  CHECK(db.lookup({"x", 1}) != nullptr);
  REQUIRE(ctx.imports.size() == 2);
  CHECK(ctx.imports[0].library);
  CHECK(ctx.imports[0].resolved.has_value());
  CHECK(ctx.imports[0].target == "library(mylib)");
  CHECK_FALSE(ctx.imports[1].resolved.has_value());
}

TEST_CASE("use_module makes exported operators visible") {
  TempDir dir;
  dir.write("ops.pl", ":- module(ops, [op(700, xfx, ===), op(200, xf, bang), eq/2]).\n"
                      ":- op(300, xfx, hidden).\neq(X, X).\n");
  dir.write("plain.pl", ":- op(700, xfx, <==>).\n");
  dir.write("a.pl", ":- use_module(ops).\n:- ensure_loaded(plain).\nt :- a === b, x bang, c <==> d.\n"
                    "u(a hidden b).\n");
  Loader loader;
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  ctx.file = dir / "a.pl";
  ctx.loader = &loader;
  auto r = consult_text(plf::test::read_file(ctx.file), db, chain, ctx);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].span.start_line == 4);
  CHECK(db.lookup({"t", 0}) != nullptr);
}

TEST_CASE("use_module/2 imports only the listed operators") {
  TempDir dir;
  dir.write("ops.pl", ":- module(ops, [op(700, xfx, ===), op(700, xfx, =/=)]).\n");
  dir.write("a.pl", ":- use_module(ops, [op(700, xfx, ===)]).\nx(a === b).\ny(a =/= b).\n");
  Loader loader;
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  ctx.file = dir / "a.pl";
  ctx.loader = &loader;
  auto r = consult_text(plf::test::read_file(ctx.file), db, chain, ctx);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].span.start_line == 3);
}

TEST_CASE("include inlines the file and import cycles terminate") {
  TempDir dir;
  dir.write("inc.pl", ":- op(700, xfx, ===).\ninc_fact(1).\n");
  dir.write("a.pl", ":- include(inc).\nx(a === b).\n:- use_module(b).\n");
  dir.write("b.pl", ":- module(b, []).\n:- use_module(a).\n");
  Loader loader;
  Database db;
  EngineChain chain = make_consult_chain();
  LoadContext ctx;
  ctx.file = dir / "a.pl";
  ctx.loader = &loader;
  ctx.chain = &chain;
  auto r = consult_text(plf::test::read_file(ctx.file), db, chain, ctx);
  CHECK(r.diagnostics.empty());
  CHECK(db.lookup({"inc_fact", 1}) != nullptr);
  CHECK(db.lookup({"x", 1}) != nullptr);
}

TEST_CASE("read-eval loop answers queries") {
  CHECK(run_repl("X = 1.\n") == "?- X = 1\ntrue\n?- \n");
  CHECK(run_repl("X = f(Y), Y = 2.\n") == "?- X = f(2)\nY = 2\ntrue\n?- \n");
  CHECK(run_repl("1 = 2.\n") == "?- false\n?- \n");
  CHECK(run_repl("") == "?- \n");
}

TEST_CASE("read-eval loop steps through solutions") {
  std::string out = run_repl("(X = 1 ; X = 2).\n;\n;\n");
  CHECK(out == "?- X = 1\ntrue\nX = 2\ntrue\nfalse\n?- \n");
  out = run_repl("(X = 1 ; X = 2).\nY = 3.\n");
  CHECK(out == "?- X = 1\ntrue\n?- Y = 3\ntrue\n?- \n");
}

TEST_CASE("read-eval loop honours operator directives") {
  std::string out = run_repl(":- op(9, xf, bang).\n3 bang = Y.\n");
  CHECK(out == "?- ?- Y = 3 bang\ntrue\n?- \n");
}

TEST_CASE("read-eval loop reports errors and carries on") {
  std::string out = run_repl("nonsense(.\nX = 1.\n");
  CHECK(out.find("error:") != std::string::npos);
  CHECK(out.find("X = 1\ntrue\n") != std::string::npos);
  out = run_repl("foo(1).\n");
  CHECK(out.find("error: existence_error(procedure, foo/1)") != std::string::npos);
  out = run_repl("X = 1,\n  Y = 2.\n");
  CHECK(out == "?- X = 1\nY = 2\ntrue\n?- \n");
}
