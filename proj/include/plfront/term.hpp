// SPDX-License-Identifier: Apache-2.0
//
// Typed Prolog AST produced by the reader.
//
// Terms are plain values. Every node carries the span of the whole subterm
// and, for atoms, compounds and operator applications, the span of the
// name/operator token itself. Lists and curly terms keep their surface form;
// canonical() and structurally_equal() see through that sugar.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plfront/operators.hpp"
#include "plfront/source.hpp"

namespace plf {

enum class TermKind { Atom, Var, Int, Float, Str, Compound, List, Curly, OpApply };

struct Term {
  TermKind kind = TermKind::Atom;
  /// Atom text, variable name, functor, operator name or string contents.
  std::string name;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  /// Per-sentence variable number; -1 for non-variables.
  int var_id = -1;
  /// Compound/OpApply: arguments. List: elements followed by the tail
  /// (the atom [] for a proper list). Curly: the single braced term.
  std::vector<Term> args;
  /// Set for OpApply only.
  std::optional<OperatorDef> op;
  SourceSpan span;
  SourceSpan name_span;

  static Term make_atom(std::string name, SourceSpan span = {});
  static Term make_var(std::string name, int id, SourceSpan span = {});
  static Term make_int(std::int64_t value, SourceSpan span = {});
  static Term make_float(double value, SourceSpan span = {});
  static Term make_string(std::string text, SourceSpan span = {});
  static Term make_compound(std::string functor, std::vector<Term> args, SourceSpan span = {});
  static Term make_op(const OperatorDef& def, std::vector<Term> args, SourceSpan span = {});
  /// Builds a list from elements and an optional tail (defaults to []).
  static Term make_list(std::vector<Term> elements, std::optional<Term> tail = std::nullopt,
                        SourceSpan span = {});
  static Term make_curly(Term inner, SourceSpan span = {});

  [[nodiscard]] bool is_atom() const { return kind == TermKind::Atom; }
  [[nodiscard]] bool is_atom(std::string_view text) const {
    return kind == TermKind::Atom && name == text;
  }
  [[nodiscard]] bool is_var() const { return kind == TermKind::Var; }
  [[nodiscard]] bool is_number() const {
    return kind == TermKind::Int || kind == TermKind::Float;
  }
  [[nodiscard]] bool is_callable() const;

  /// Functor name seen through sugar: '.' for non-empty lists, '{}' for curly.
  [[nodiscard]] std::string_view functor() const;
  /// Arity seen through sugar; 0 for atomic terms and variables.
  [[nodiscard]] std::size_t arity() const;

  /// True for Compound/OpApply/List/Curly named `name` with `arity` args.
  [[nodiscard]] bool is(std::string_view name, std::size_t arity) const;

  /// Argument `i` of a callable term, desugaring lists into '.'/2 cells.
  [[nodiscard]] Term arg(std::size_t i) const;
  /// Argument list seen through sugar.
  [[nodiscard]] std::vector<Term> arguments() const;
};

/// write_canonical-style rendering with variables numbered '$VAR'(N) by first
/// occurrence. Spans, operator notation and list/curly sugar do not affect it.
std::string canonical(const Term& term);

/// Equality modulo spans, sugar and consistent variable renaming.
bool structurally_equal(const Term& a, const Term& b);

/// Calls `fn` on every node in pre-order.
template <typename Fn>
void visit(const Term& term, Fn&& fn) {
  fn(term);
  for (const Term& child : term.args) visit(child, fn);
}

/// Flattens a ','-conjunction or a list into its elements; any other term
/// yields itself. Used for directive arguments like `dynamic((a/1, b/2))`.
std::vector<Term> flatten_sequence(const Term& term);

/// Converts a proper list term into its elements; nullopt otherwise.
std::optional<std::vector<Term>> list_elements(const Term& term);

}  // namespace plf
