// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plfront/catalog.hpp"
#include "plfront/solver.hpp"

using namespace plf;

TEST_CASE("records, comments and arguments") {
  std::vector<std::string> errors;
  Catalog c = Catalog::parse(
      "% comment\n"
      "foo/2 system\n"
      "foo(+In, -Out)\n"
      "Relates things.\n"
      "In: the input\n"
      "Out: the output\n"
      "\n"
      "bar/1 mylib\n"
      "bar(?X)\n"
      "\n"
      "broken\n"
      "x\n",
      &errors);
  REQUIRE(c.entries().size() == 2);
  const CatalogEntry* foo = c.find({"foo", 2});
  REQUIRE(foo != nullptr);
  CHECK(foo->builtin());
  CHECK(foo->synopsis == "foo(+In, -Out)");
  CHECK(foo->summary == "Relates things.");
  REQUIRE(foo->arguments.size() == 2);
  CHECK(foo->arguments[1] == std::pair<std::string, std::string>{"Out", "the output"});
  CHECK(describe(*foo) == "foo(+In, -Out)\nRelates things.\nIn: the input\nOut: the output");
  const CatalogEntry* bar = c.find({"bar", 1});
  REQUIRE(bar != nullptr);
  CHECK_FALSE(bar->builtin());
  CHECK(describe(*bar) == "bar(?X)  [library(mylib)]");
  CHECK(c.is_builtin({"foo", 2}));
  CHECK_FALSE(c.is_builtin({"bar", 1}));
  CHECK(c.libraries() == std::set<std::string>{"mylib"});
  CHECK(errors.size() == 1);
}

TEST_CASE("bundled catalog covers every solver built-in") {
  const Catalog& c = Catalog::bundled();
  for (const PredicateIndicator& pi : solver_builtins()) {
    CAPTURE(pi.str());
    const CatalogEntry* e = c.find(pi);
    REQUIRE(e != nullptr);
    CHECK(e->builtin());
    CHECK_FALSE(e->synopsis.empty());
  }
}

TEST_CASE("bundled libraries") {
  const Catalog& c = Catalog::bundled();
  CHECK(c.libraries() == std::set<std::string>{"apply", "lists"});
  const CatalogEntry* member = c.find({"member", 2});
  REQUIRE(member != nullptr);
  CHECK(member->module == "lists");
  CHECK_FALSE(c.is_builtin({"member", 2}));
  CHECK(c.is_builtin({"write", 1}));
  CHECK(c.is_builtin({"is", 2}));
  bool has_maplist = false;
  for (const CatalogEntry* e : c.exports_of("apply")) has_maplist |= e->indicator.name == "maplist";
  CHECK(has_maplist);
}
