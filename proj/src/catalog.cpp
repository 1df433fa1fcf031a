// SPDX-License-Identifier: Apache-2.0

#include "plfront/catalog.hpp"

#include <sstream>

#include "plfront/lexer.hpp"
#include "plfront/solver.hpp"

namespace plf {

namespace detail {
extern const std::string_view kCatalogText;
}  // namespace detail

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::optional<PredicateIndicator> parse_indicator(std::string_view text) {
  std::size_t slash = text.rfind('/');
  if (slash == std::string_view::npos || slash == 0) return std::nullopt;
  std::string_view name = text.substr(0, slash);
  std::string_view arity = text.substr(slash + 1);
  if (arity.empty()) return std::nullopt;
  std::size_t n = 0;
  for (char c : arity) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  std::string decoded(name);
  if (name.size() >= 2 && name.front() == '\'') {
    auto v = decode_quoted(name);
    if (!v) return std::nullopt;
    decoded = *v;
  }
  return PredicateIndicator{decoded, n};
}

// An argument line is `Name: text` where Name is a Prolog variable name.
std::optional<std::pair<std::string, std::string>> argument_line(std::string_view line) {
  std::size_t colon = line.find(": ");
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  std::string_view name = line.substr(0, colon);
  if (!(name.front() >= 'A' && name.front() <= 'Z')) return std::nullopt;
  for (char c : name) {
    if (!is_alnum_char(c)) return std::nullopt;
  }
  return std::make_pair(std::string(name), std::string(strip(line.substr(colon + 2))));
}

}  // namespace

Catalog Catalog::parse(std::string_view text, std::vector<std::string>* errors) {
  Catalog cat;
  std::vector<std::string_view> record;
  std::size_t line_no = 0;
  std::size_t record_line = 0;

  auto flush = [&] {
    if (record.empty()) return;
    std::string_view head = record[0];
    std::size_t space = head.rfind(' ');
    std::optional<PredicateIndicator> pi;
    if (space != std::string_view::npos) pi = parse_indicator(strip(head.substr(0, space)));
    if (!pi || record.size() < 2) {
      if (errors != nullptr) {
        errors->push_back("line " + std::to_string(record_line) + ": malformed record");
      }
      record.clear();
      return;
    }
    CatalogEntry e;
    e.indicator = *pi;
    e.module = std::string(strip(head.substr(space + 1)));
    e.synopsis = std::string(record[1]);
    for (std::size_t i = 2; i < record.size(); ++i) {
      if (auto arg = argument_line(record[i])) {
        e.arguments.push_back(std::move(*arg));
      } else {
        if (!e.summary.empty()) e.summary += ' ';
        e.summary += record[i];
      }
    }
    if (cat.index_.count(e.indicator) == 0) {
      cat.index_[e.indicator] = cat.entries_.size();
      cat.entries_.push_back(std::move(e));
    } else if (errors != nullptr) {
      errors->push_back("line " + std::to_string(record_line) + ": duplicate " +
                        e.indicator.str());
    }
    record.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = strip(text.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (!line.empty() && line.front() == '%') continue;
    if (line.empty()) {
      flush();
      continue;
    }
    if (record.empty()) record_line = line_no;
    record.push_back(line);
  }
  flush();
  return cat;
}

const Catalog& Catalog::bundled() {
  static const Catalog cat = parse(detail::kCatalogText);
  return cat;
}

const CatalogEntry* Catalog::find(const PredicateIndicator& pi) const {
  auto it = index_.find(pi.unqualified());
  return it == index_.end() ? nullptr : &entries_[it->second];
}

bool Catalog::is_builtin(const PredicateIndicator& pi) const {
  if (is_solver_builtin(pi.name, pi.arity)) return true;
  const CatalogEntry* e = find(pi);
  return e != nullptr && e->builtin();
}

std::set<std::string> Catalog::libraries() const {
  std::set<std::string> out;
  for (const CatalogEntry& e : entries_) {
    if (!e.builtin()) out.insert(e.module);
  }
  return out;
}

std::vector<const CatalogEntry*> Catalog::exports_of(std::string_view library) const {
  std::vector<const CatalogEntry*> out;
  for (const CatalogEntry& e : entries_) {
    if (e.module == library) out.push_back(&e);
  }
  return out;
}

std::string describe(const CatalogEntry& entry) {
  std::ostringstream out;
  out << entry.synopsis;
  if (!entry.builtin()) out << "  [library(" << entry.module << ")]";
  if (!entry.summary.empty()) out << '\n' << entry.summary;
  for (const auto& [name, text] : entry.arguments) out << '\n' << name << ": " << text;
  return out.str();
}

}  // namespace plf
