// SPDX-License-Identifier: Apache-2.0

#include "plfront/printer.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "plfront/database.hpp"
#include "plfront/lexer.hpp"

namespace plf {

namespace {

bool is_letter_start(char c) {
  return (c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80;
}

void append_escaped(std::string& out, std::string_view text, char quote) {
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\a': out += "\\a"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\v': out += "\\v"; break;
      default:
        if (c == quote) {
          out.push_back('\\');
          out.push_back(c);
        } else if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          char buf[8];
          auto res = std::to_chars(buf, buf + sizeof buf, static_cast<int>(c), 16);
          out += "\\x";
          out.append(buf, res.ptr);
          out += "\\";
        } else {
          out.push_back(c);
        }
    }
  }
}

bool needs_quotes(std::string_view a) {
  if (a.empty()) return true;
  if (a == "[]" || a == "{}" || a == "!" || a == ";") return false;
  if (is_letter_start(a.front())) {
    for (char c : a) {
      if (!is_alnum_char(c)) return true;
    }
    return false;
  }
  bool all_symbol = true;
  for (char c : a) all_symbol = all_symbol && is_symbol_char(c);
  if (all_symbol) {
    return a == "." || a.find("/*") != std::string_view::npos;
  }
  return true;
}

class Printer {
 public:
  Printer(const OperatorTable& ops, bool fresh_names) : ops_(ops), fresh_(fresh_names) {}

  std::string write(const Term& t, int max, bool operand) {
    switch (t.kind) {
      case TermKind::Atom: {
        std::string s = quote_atom(t.name);
        if (operand && ops_.is_operator(t.name)) return "(" + s + ")";
        return s;
      }
      case TermKind::Var:
        return var_name(t);
      case TermKind::Int:
        return std::to_string(t.int_value);
      case TermKind::Float:
        return format_float(t.float_value);
      case TermKind::Str:
        return quote_string(t.name);
      case TermKind::List:
      case TermKind::Curly:
      case TermKind::Compound:
      case TermKind::OpApply:
        return write_compound(t, max);
    }
    return {};
  }

 private:
  std::string var_name(const Term& t) {
    if (fresh_) {
      if (t.name == "_" && t.var_id < 0) return "_";
      const auto key = t.var_id >= 0 ? std::to_string(t.var_id) : t.name;
      auto [it, inserted] = fresh_names_.try_emplace(key);
      if (inserted) it->second = letter_name(fresh_names_.size() - 1);
      return it->second;
    }
    if (t.name.empty()) return "_G" + std::to_string(t.var_id);
    return t.name;
  }

  static std::string letter_name(std::size_t n) {
    std::string s(1, static_cast<char>('A' + n % 26));
    if (n >= 26) s += std::to_string(n / 26);
    return s;
  }

  std::string write_list(const Term& t) {
    std::string out = "[";
    const Term* cur = &t;
    Term holder;
    bool first = true;
    while (true) {
      if (cur->kind == TermKind::List) {
        for (std::size_t i = 0; i + 1 < cur->args.size(); ++i) {
          if (!first) out += ",";
          out += write(cur->args[i], 999, false);
          first = false;
        }
        Term next = cur->args.back();
        holder = std::move(next);
        cur = &holder;
      } else if (cur->is(".", 2)) {
        if (!first) out += ",";
        out += write(cur->args[0], 999, false);
        first = false;
        Term next = cur->args[1];
        holder = std::move(next);
        cur = &holder;
      } else {
        break;
      }
    }
    if (!cur->is_atom("[]")) {
      out += "|";
      out += write(*cur, 999, false);
    }
    out += "]";
    return out;
  }

  std::string write_compound(const Term& t, int max) {
    const std::string name(t.functor());
    const std::size_t n = t.arity();
    if (t.kind == TermKind::List || (n == 2 && name == ".")) return write_list(t);
    if (n == 1 && name == "{}") return "{" + write(t.args[0], 1200, false) + "}";

    if (n == 2) {
      const OperatorDef* def = name == "|" ? &bar_ : ops_.infix(name);
      if (def != nullptr) {
        const std::string left = write(t.args[0], def->left_max(), true);
        const std::string right = write(t.args[1], def->right_max(), true);
        std::string s = join_infix(left, name, right);
        return def->priority > max ? "(" + s + ")" : s;
      }
    }
    if (n == 1) {
      const Term& arg = t.args[0];
      if (const OperatorDef* def = ops_.prefix(name); def != nullptr && !arg.is_number()) {
        std::string s = quote_atom(name) + " " + write(arg, def->left_max(), true);
        return def->priority > max ? "(" + s + ")" : s;
      }
      if (const OperatorDef* def = ops_.postfix(name); def != nullptr) {
        std::string s = write(arg, def->left_max(), true) + " " + quote_atom(name);
        return def->priority > max ? "(" + s + ")" : s;
      }
    }
    std::string s = functor_text(name) + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i > 0) s += ",";
      s += write(t.args[i], 999, false);
    }
    s += ")";
    return s;
  }

  static std::string functor_text(const std::string& name) {
    if (name == "[]" || name == "{}") return "'" + name + "'";
    return quote_atom(name);
  }

  static std::string join_infix(const std::string& left, const std::string& name,
                                const std::string& right) {
    if (name == "," || name == "|") return left + name + right;
    const std::string op = quote_atom(name);
    const bool symbolic = !op.empty() && (is_symbol_char(op.front()) || op == ";");
    if (!symbolic) return left + " " + op + " " + right;
    std::string s = left;
    if (!left.empty() && is_symbol_char(left.back())) s += " ";
    s += op;
    if (!right.empty() && is_symbol_char(right.front())) s += " ";
    s += right;
    return s;
  }

  const OperatorTable& ops_;
  bool fresh_;
  std::map<std::string, std::string> fresh_names_;
  OperatorDef bar_{"|", 1100, Fixity::xfy};
};

}  // namespace

std::string quote_atom(std::string_view atom) {
  if (!needs_quotes(atom)) return std::string(atom);
  std::string out = "'";
  append_escaped(out, atom, '\'');
  out += "'";
  return out;
}

std::string quote_string(std::string_view text) {
  std::string out = "\"";
  append_escaped(out, text, '"');
  out += "\"";
  return out;
}

std::string format_float(double value) {
  if (std::isnan(value)) return "1.5NaN";
  if (std::isinf(value)) return value > 0 ? "1.0Inf" : "-1.0Inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, res.ptr);
  const auto e = s.find('e');
  const std::string mantissa = s.substr(0, e);
  const std::string exponent = e == std::string::npos ? "" : s.substr(e);
  if (mantissa.find('.') == std::string::npos) return mantissa + ".0" + exponent;
  return s;
}

std::string pretty_print(const Term& term, const OperatorTable& ops) {
  return Printer(ops, false).write(term, 1200, false);
}

std::string pretty_print(const Term& term, const Database& db) {
  return pretty_print(term, db.operators());
}

std::string pretty_print_fresh(const Term& term, const OperatorTable& ops) {
  return Printer(ops, true).write(term, 1200, false);
}

}  // namespace plf
