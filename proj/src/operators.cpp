// SPDX-License-Identifier: Apache-2.0

#include "plfront/operators.hpp"

#include <algorithm>
#include <array>

#include "plfront/error.hpp"
#include "plfront/printer.hpp"

namespace plf {

std::string_view to_string(Fixity fixity) {
  switch (fixity) {
    case Fixity::xfx: return "xfx";
    case Fixity::xfy: return "xfy";
    case Fixity::yfx: return "yfx";
    case Fixity::fy: return "fy";
    case Fixity::fx: return "fx";
    case Fixity::xf: return "xf";
    case Fixity::yf: return "yf";
  }
  return "xfx";
}

std::optional<Fixity> parse_fixity(std::string_view text) {
  static constexpr std::array<Fixity, 7> kAll = {Fixity::xfx, Fixity::xfy, Fixity::yfx,
                                                 Fixity::fy,  Fixity::fx,  Fixity::xf,
                                                 Fixity::yf};
  for (Fixity f : kAll) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

OpClass op_class(Fixity fixity) {
  switch (fixity) {
    case Fixity::fy:
    case Fixity::fx:
      return OpClass::Prefix;
    case Fixity::xf:
    case Fixity::yf:
      return OpClass::Postfix;
    default:
      return OpClass::Infix;
  }
}

int OperatorDef::left_max() const {
  switch (fixity) {
    case Fixity::yfx:
    case Fixity::fy:
    case Fixity::yf:
      return priority;
    default:
      return priority - 1;
  }
}

int OperatorDef::right_max() const {
  return fixity == Fixity::xfy ? priority : priority - 1;
}

std::string render_op(const OperatorDef& def) {
  return "op(" + std::to_string(def.priority) + ", " + std::string(to_string(def.fixity)) + ", " +
         quote_atom(def.name) + ")";
}

OperatorTable OperatorTable::standard() {
  struct Seed {
    int priority;
    Fixity fixity;
    std::initializer_list<const char*> names;
  };
  const std::initializer_list<Seed> seeds = {
      {1200, Fixity::xfx, {":-", "-->"}},
      {1200, Fixity::fx, {":-", "?-"}},
      {1150, Fixity::fx,
       {"dynamic", "discontiguous", "initialization", "meta_predicate", "multifile", "public"}},
      {1100, Fixity::xfy, {";"}},
      {1050, Fixity::xfy, {"->", "*->"}},
      {1000, Fixity::xfy, {","}},
      {900, Fixity::fy, {"\\+"}},
      {700, Fixity::xfx,
       {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=", "<", ">",
        "=<", ">="}},
      {600, Fixity::xfy, {":"}},
      {500, Fixity::yfx, {"+", "-", "/\\", "\\/"}},
      {400, Fixity::yfx, {"*", "/", "//", "rem", "mod", "div", "<<", ">>", "xor"}},
      {200, Fixity::xfx, {"**"}},
      {200, Fixity::xfy, {"^"}},
      {200, Fixity::fy, {"-", "+", "\\"}},
  };
  OperatorTable table;
  for (const Seed& seed : seeds) {
    for (const char* name : seed.names) {
      OperatorDef def{name, seed.priority, seed.fixity};
      Entry& e = table.entries_[def.name];
      switch (def.cls()) {
        case OpClass::Prefix: e.prefix = def; break;
        case OpClass::Infix: e.infix = def; break;
        case OpClass::Postfix: e.postfix = def; break;
      }
    }
  }
  return table;
}

void OperatorTable::add(const OperatorDef& def) {
  if (def.priority < 0 || def.priority > 1200) {
    throw PrologError(ErrorKind::Domain, "operator_priority, " + std::to_string(def.priority));
  }
  if (def.name == "," || def.name == "|") {
    throw PrologError(ErrorKind::Permission, "modify, operator, " + quote_atom(def.name));
  }
  auto it = entries_.find(def.name);
  const OpClass cls = def.cls();
  if (def.priority == 0) {
    if (it == entries_.end()) return;
    Entry& e = it->second;
    switch (cls) {
      case OpClass::Prefix: e.prefix.reset(); break;
      case OpClass::Infix: e.infix.reset(); break;
      case OpClass::Postfix: e.postfix.reset(); break;
    }
    if (!e.prefix && !e.infix && !e.postfix) entries_.erase(it);
    return;
  }
  if (it != entries_.end()) {
    const Entry& e = it->second;
    if ((cls == OpClass::Infix && e.postfix) || (cls == OpClass::Postfix && e.infix)) {
      throw PrologError(ErrorKind::Permission, "create, operator, " + quote_atom(def.name));
    }
  }
  Entry& e = entries_[def.name];
  switch (cls) {
    case OpClass::Prefix: e.prefix = def; break;
    case OpClass::Infix: e.infix = def; break;
    case OpClass::Postfix: e.postfix = def; break;
  }
}

void OperatorTable::remove_all(std::string_view name) {
  if (auto it = entries_.find(name); it != entries_.end()) entries_.erase(it);
}

const OperatorDef* OperatorTable::prefix(std::string_view name) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.prefix ? &*it->second.prefix : nullptr;
}

const OperatorDef* OperatorTable::infix(std::string_view name) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.infix ? &*it->second.infix : nullptr;
}

const OperatorDef* OperatorTable::postfix(std::string_view name) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.postfix ? &*it->second.postfix : nullptr;
}

bool OperatorTable::is_operator(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

int OperatorTable::max_priority(std::string_view name) const {
  int best = 0;
  for (const OperatorDef& def : definitions(name)) best = std::max(best, def.priority);
  return best;
}

std::vector<OperatorDef> OperatorTable::definitions(std::string_view name) const {
  std::vector<OperatorDef> out;
  auto it = entries_.find(name);
  if (it == entries_.end()) return out;
  for (const auto* slot : {&it->second.prefix, &it->second.infix, &it->second.postfix}) {
    if (*slot) out.push_back(**slot);
  }
  return out;
}

std::vector<OperatorDef> OperatorTable::all() const {
  std::vector<OperatorDef> out;
  for (const auto& [name, entry] : entries_) {
    for (const auto* slot : {&entry.prefix, &entry.infix, &entry.postfix}) {
      if (*slot) out.push_back(**slot);
    }
  }
  return out;
}

}  // namespace plf
