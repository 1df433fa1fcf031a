// SPDX-License-Identifier: Apache-2.0

#include "plfront/database.hpp"

#include "plfront/error.hpp"
#include "plfront/printer.hpp"

namespace plf {

std::string PredicateIndicator::str() const {
  std::string out;
  if (!module.empty()) out = quote_atom(module) + ":";
  out += quote_atom(name) + "/" + std::to_string(arity);
  return out;
}

std::optional<PredicateIndicator> indicator_from_term(const Term& term, bool* dcg) {
  const bool slash = term.is("/", 2);
  const bool dslash = term.is("//", 2);
  if (!slash && !dslash) return std::nullopt;
  const Term name = term.arg(0);
  const Term arity = term.arg(1);
  if (!name.is_atom() || arity.kind != TermKind::Int || arity.int_value < 0) {
    return std::nullopt;
  }
  if (dcg != nullptr) *dcg = dslash;
  return PredicateIndicator(name.name, static_cast<std::size_t>(arity.int_value) + (dslash ? 2 : 0));
}

void Database::assert_clause(const Term& head, const Term& body, const SourceSpan& span) {
  if (!head.is_callable()) {
    throw PrologError(ErrorKind::Type, "callable, " + canonical(head));
  }
  PredicateEntry& entry = declare(PredicateIndicator(std::string(head.functor()), head.arity()));
  entry.clauses.push_back(Clause{head, body, span});
}

PredicateEntry& Database::declare(const PredicateIndicator& pi) {
  auto [it, inserted] = predicates_.try_emplace(pi);
  if (inserted) it->second.indicator = pi;
  return it->second;
}

const PredicateEntry* Database::lookup(const PredicateIndicator& pi) const {
  auto it = predicates_.find(pi);
  return it == predicates_.end() ? nullptr : &it->second;
}

std::optional<std::string> Database::flag(std::string_view name) const {
  auto it = flags_.find(name);
  if (it == flags_.end()) return std::nullopt;
  return it->second;
}

}  // namespace plf
