// SPDX-License-Identifier: Apache-2.0
//
// Runtime state consulted and updated while a file is read: the operator
// table, the clause database, module information and Prolog flags.

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plfront/operators.hpp"
#include "plfront/source.hpp"
#include "plfront/term.hpp"

namespace plf {

struct PredicateIndicator {
  std::string module;  // empty when unqualified
  std::string name;
  std::size_t arity = 0;

  PredicateIndicator() = default;
  PredicateIndicator(std::string n, std::size_t a) : name(std::move(n)), arity(a) {}
  PredicateIndicator(std::string m, std::string n, std::size_t a)
      : module(std::move(m)), name(std::move(n)), arity(a) {}

  /// `name/arity`, or `module:name/arity` when qualified. Names are quoted
  /// as needed.
  [[nodiscard]] std::string str() const;

  /// Same indicator without the module qualifier.
  [[nodiscard]] PredicateIndicator unqualified() const { return {name, arity}; }

  friend auto operator<=>(const PredicateIndicator&, const PredicateIndicator&) = default;
};

/// Parses `name/arity` or `name//arity` (DCG, arity + 2). Sets `*dcg` when
/// the double-slash form was used.
std::optional<PredicateIndicator> indicator_from_term(const Term& term, bool* dcg = nullptr);

struct Clause {
  Term head;
  Term body;
  SourceSpan span;
};

struct PredicateProperties {
  bool dynamic = false;
  bool discontiguous = false;
  bool exported = false;
  bool dcg = false;

  friend bool operator==(const PredicateProperties&, const PredicateProperties&) = default;
};

struct PredicateEntry {
  PredicateIndicator indicator;
  std::vector<Clause> clauses;
  PredicateProperties properties;
};

struct ModuleImport {
  std::string target;  // printed import spec, e.g. `library(lists)` or `b`
  std::optional<std::vector<PredicateIndicator>> names;  // nullopt = everything
};

struct ModuleInfo {
  std::string name;
  std::set<PredicateIndicator> exports;
  std::vector<OperatorDef> exported_operators;
  std::vector<ModuleImport> imports;
  std::optional<FileId> defining_file;
};

class Database {
 public:
  Database() : operators_(OperatorTable::standard()) {}

  [[nodiscard]] OperatorTable& operators() { return operators_; }
  [[nodiscard]] const OperatorTable& operators() const { return operators_; }

  /// Appends a clause, creating the predicate entry if needed. Throws
  /// PrologError(type_error) when the head is not callable.
  void assert_clause(const Term& head, const Term& body, const SourceSpan& span);

  /// Creates (or returns) the entry for `pi` without adding clauses.
  PredicateEntry& declare(const PredicateIndicator& pi);

  /// nullptr when the predicate was never defined or declared.
  [[nodiscard]] const PredicateEntry* lookup(const PredicateIndicator& pi) const;

  [[nodiscard]] const std::map<PredicateIndicator, PredicateEntry>& predicates() const {
    return predicates_;
  }

  [[nodiscard]] std::optional<ModuleInfo>& module() { return module_; }
  [[nodiscard]] const std::optional<ModuleInfo>& module() const { return module_; }

  /// Imports recorded in a file that is not a module.
  [[nodiscard]] std::vector<ModuleImport>& file_imports() { return file_imports_; }
  [[nodiscard]] const std::vector<ModuleImport>& file_imports() const { return file_imports_; }

  void set_flag(const std::string& name, std::string value) { flags_[name] = std::move(value); }
  [[nodiscard]] std::optional<std::string> flag(std::string_view name) const;

 private:
  OperatorTable operators_;
  std::map<PredicateIndicator, PredicateEntry> predicates_;
  std::optional<ModuleInfo> module_;
  std::vector<ModuleImport> file_imports_;
  std::map<std::string, std::string, std::less<>> flags_;
};

}  // namespace plf
