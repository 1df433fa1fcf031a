// SPDX-License-Identifier: Apache-2.0
//
// Term output. pretty_print() writes operator notation with the minimum
// parenthesization the reader needs to rebuild the same term under the same
// operator table.

#pragma once

#include <string>
#include <string_view>

#include "plfront/operators.hpp"
#include "plfront/term.hpp"

namespace plf {

class Database;

/// Atom text as writeq/1 would print it: bare when it reads back as the same
/// atom, single-quoted with escapes otherwise.
std::string quote_atom(std::string_view atom);

/// Double-quoted string literal with escapes.
std::string quote_string(std::string_view text);

/// Shortest representation that reads back as the same double and always
/// lexes as a Float token (1.0, 1.5e+20).
std::string format_float(double value);

std::string pretty_print(const Term& term, const OperatorTable& ops);
std::string pretty_print(const Term& term, const Database& db);

/// pretty_print with variables renamed A, B, C... by first occurrence.
std::string pretty_print_fresh(const Term& term, const OperatorTable& ops);

}  // namespace plf
