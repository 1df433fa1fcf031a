// SPDX-License-Identifier: Apache-2.0
//
// Operator definitions and the mutable operator table that drives the
// reader's dynamic grammar.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plf {

enum class Fixity { xfx, xfy, yfx, fy, fx, xf, yf };

enum class OpClass { Prefix, Infix, Postfix };

std::string_view to_string(Fixity fixity);
std::optional<Fixity> parse_fixity(std::string_view text);
OpClass op_class(Fixity fixity);

struct OperatorDef {
  std::string name;
  int priority = 0;
  Fixity fixity = Fixity::xfx;

  [[nodiscard]] OpClass cls() const { return op_class(fixity); }

  /// Highest priority allowed for the left (or only prefix/postfix) argument.
  [[nodiscard]] int left_max() const;
  /// Highest priority allowed for the right argument of an infix operator.
  [[nodiscard]] int right_max() const;

  friend bool operator==(const OperatorDef&, const OperatorDef&) = default;
};

/// Renders a definition as `op(700, xfx, ===)` with the name quoted as needed.
std::string render_op(const OperatorDef& def);

class OperatorTable {
 public:
  /// Empty table: no operators at all, not even ','.
  OperatorTable() = default;

  /// The default table a fresh database starts with.
  static OperatorTable standard();

  /// Adds, replaces or (priority 0) removes a definition.
  /// Throws PrologError: domain_error for a priority outside 0..1200,
  /// permission_error for ',' / '|' or an infix+postfix conflict.
  void add(const OperatorDef& def);

  /// Removes every definition of `name`, regardless of class.
  void remove_all(std::string_view name);

  [[nodiscard]] const OperatorDef* prefix(std::string_view name) const;
  [[nodiscard]] const OperatorDef* infix(std::string_view name) const;
  [[nodiscard]] const OperatorDef* postfix(std::string_view name) const;

  [[nodiscard]] bool is_operator(std::string_view name) const;

  /// Highest priority among the definitions of `name`, 0 if none.
  [[nodiscard]] int max_priority(std::string_view name) const;

  /// All definitions of `name` in prefix, infix, postfix order.
  [[nodiscard]] std::vector<OperatorDef> definitions(std::string_view name) const;

  /// Every definition, sorted by name then class.
  [[nodiscard]] std::vector<OperatorDef> all() const;

  friend bool operator==(const OperatorTable&, const OperatorTable&) = default;

 private:
  struct Entry {
    std::optional<OperatorDef> prefix;
    std::optional<OperatorDef> infix;
    std::optional<OperatorDef> postfix;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace plf
