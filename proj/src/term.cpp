// SPDX-License-Identifier: Apache-2.0

#include "plfront/term.hpp"

#include <map>

#include "plfront/printer.hpp"

namespace plf {

Term Term::make_atom(std::string name, SourceSpan span) {
  Term t;
  t.kind = TermKind::Atom;
  t.name = std::move(name);
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_var(std::string name, int id, SourceSpan span) {
  Term t;
  t.kind = TermKind::Var;
  t.name = std::move(name);
  t.var_id = id;
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_int(std::int64_t value, SourceSpan span) {
  Term t;
  t.kind = TermKind::Int;
  t.int_value = value;
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_float(double value, SourceSpan span) {
  Term t;
  t.kind = TermKind::Float;
  t.float_value = value;
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_string(std::string text, SourceSpan span) {
  Term t;
  t.kind = TermKind::Str;
  t.name = std::move(text);
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_compound(std::string functor, std::vector<Term> args, SourceSpan span) {
  Term t;
  t.kind = TermKind::Compound;
  t.name = std::move(functor);
  t.args = std::move(args);
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_op(const OperatorDef& def, std::vector<Term> args, SourceSpan span) {
  Term t;
  t.kind = TermKind::OpApply;
  t.name = def.name;
  t.op = def;
  t.args = std::move(args);
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_list(std::vector<Term> elements, std::optional<Term> tail, SourceSpan span) {
  if (elements.empty()) {
    return tail ? std::move(*tail) : make_atom("[]", span);
  }
  Term t;
  t.kind = TermKind::List;
  t.name = ".";
  t.args = std::move(elements);
  t.args.push_back(tail ? std::move(*tail) : make_atom("[]", span));
  t.span = span;
  t.name_span = span;
  return t;
}

Term Term::make_curly(Term inner, SourceSpan span) {
  Term t;
  t.kind = TermKind::Curly;
  t.name = "{}";
  t.args.push_back(std::move(inner));
  t.span = span;
  t.name_span = span;
  return t;
}

bool Term::is_callable() const {
  switch (kind) {
    case TermKind::Atom:
    case TermKind::Compound:
    case TermKind::List:
    case TermKind::Curly:
    case TermKind::OpApply:
      return true;
    default:
      return false;
  }
}

std::string_view Term::functor() const {
  switch (kind) {
    case TermKind::List: return ".";
    case TermKind::Curly: return "{}";
    default: return name;
  }
}

std::size_t Term::arity() const {
  switch (kind) {
    case TermKind::Compound:
    case TermKind::OpApply:
      return args.size();
    case TermKind::List:
      return 2;
    case TermKind::Curly:
      return 1;
    default:
      return 0;
  }
}

bool Term::is(std::string_view functor_name, std::size_t n) const {
  return kind != TermKind::Atom && is_callable() && arity() == n && functor() == functor_name;
}

Term Term::arg(std::size_t i) const {
  if (kind != TermKind::List) return args.at(i);
  if (i == 0) return args.front();
  if (args.size() == 2) return args.back();
  Term rest = *this;
  rest.args.erase(rest.args.begin());
  rest.span = join(rest.args.front().span, rest.args.back().span);
  return rest;
}

std::vector<Term> Term::arguments() const {
  if (kind != TermKind::List) return args;
  return {arg(0), arg(1)};
}

namespace {

class CanonicalWriter {
 public:
  std::string write(const Term& t) {
    std::string out;
    emit(t, out);
    return out;
  }

 private:
  void emit(const Term& t, std::string& out) {
    switch (t.kind) {
      case TermKind::Atom:
        out += quote_atom(t.name);
        return;
      case TermKind::Var: {
        const auto key = t.var_id >= 0 ? std::to_string(t.var_id) : "n:" + t.name;
        if (t.name == "_" && t.var_id < 0) {
          out += "'$VAR'(" + std::to_string(next_++) + ")";
          return;
        }
        auto [it, inserted] = numbering_.try_emplace(key, next_);
        if (inserted) ++next_;
        out += "'$VAR'(" + std::to_string(it->second) + ")";
        return;
      }
      case TermKind::Int:
        out += std::to_string(t.int_value);
        return;
      case TermKind::Float:
        out += format_float(t.float_value);
        return;
      case TermKind::Str:
        out += quote_string(t.name);
        return;
      case TermKind::List: {
        std::size_t closers = 0;
        for (std::size_t i = 0; i + 1 < t.args.size(); ++i) {
          out += "'.'(";
          emit(t.args[i], out);
          out += ",";
          ++closers;
        }
        emit(t.args.back(), out);
        out.append(closers, ')');
        return;
      }
      case TermKind::Curly:
      case TermKind::Compound:
      case TermKind::OpApply: {
        out += quote_atom(std::string(t.functor()));
        out += "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          if (i > 0) out += ",";
          emit(t.args[i], out);
        }
        out += ")";
        return;
      }
    }
  }

  std::map<std::string, int> numbering_;
  int next_ = 0;
};

}  // namespace

std::string canonical(const Term& term) { return CanonicalWriter{}.write(term); }

bool structurally_equal(const Term& a, const Term& b) { return canonical(a) == canonical(b); }

std::vector<Term> flatten_sequence(const Term& term) {
  std::vector<Term> out;
  if (term.is(",", 2)) {
    for (const Term& part : {term.arg(0), term.arg(1)}) {
      auto sub = flatten_sequence(part);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (auto elems = list_elements(term)) {
    for (const Term& e : *elems) {
      auto sub = flatten_sequence(e);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  out.push_back(term);
  return out;
}

std::optional<std::vector<Term>> list_elements(const Term& term) {
  std::vector<Term> out;
  const Term* cur = &term;
  Term holder;
  while (true) {
    if (cur->is_atom("[]")) return out;
    if (cur->kind == TermKind::List) {
      out.insert(out.end(), cur->args.begin(), cur->args.end() - 1);
      Term next = cur->args.back();
      holder = std::move(next);
      cur = &holder;
      continue;
    }
    if (cur->is(".", 2)) {
      out.push_back(cur->args[0]);
      Term next = cur->args[1];
      holder = std::move(next);
      cur = &holder;
      continue;
    }
    return std::nullopt;
  }
}

}  // namespace plf
