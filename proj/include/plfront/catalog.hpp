// SPDX-License-Identifier: Apache-2.0
//
// Synopsis and argument text for built-ins and common library predicates,
// used by hover and completion. The bundled catalog is compiled in from
// data/builtins.catalog; its format is described at the top of that file.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plfront/database.hpp"

namespace plf {

struct CatalogEntry {
  PredicateIndicator indicator;
  std::string module;  // "system" for built-ins, else a library name
  std::string synopsis;
  std::vector<std::pair<std::string, std::string>> arguments;  // name, description
  std::string summary;  // free text lines without a `Name:` prefix

  [[nodiscard]] bool builtin() const { return module == "system"; }
};

class Catalog {
 public:
  /// Parses catalog text. Malformed records are skipped and described in
  /// `errors` when given.
  static Catalog parse(std::string_view text, std::vector<std::string>* errors = nullptr);

  /// The catalog compiled into the library.
  static const Catalog& bundled();

  [[nodiscard]] const CatalogEntry* find(const PredicateIndicator& pi) const;
  [[nodiscard]] const std::vector<CatalogEntry>& entries() const { return entries_; }

  /// True for predicates callable without any import.
  [[nodiscard]] bool is_builtin(const PredicateIndicator& pi) const;

  /// Library names (modules other than system), e.g. "lists".
  [[nodiscard]] std::set<std::string> libraries() const;
  [[nodiscard]] std::vector<const CatalogEntry*> exports_of(std::string_view library) const;

 private:
  std::vector<CatalogEntry> entries_;
  std::map<PredicateIndicator, std::size_t> index_;
};

/// Text block for hover: synopsis, summary and one line per argument.
std::string describe(const CatalogEntry& entry);

}  // namespace plf
