// SPDX-License-Identifier: Apache-2.0
//
// Prolog-style error terms raised by the database and the solver.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plf {

enum class ErrorKind {
  Instantiation,
  Type,
  Domain,
  Permission,
  Existence,
  Representation,
  Evaluation,
  Resource,
};

std::string_view to_string(ErrorKind kind);

/// An ISO error. `formal()` renders the error term, e.g.
/// `type_error(callable, 7)`.
class PrologError : public std::runtime_error {
 public:
  PrologError(ErrorKind kind, std::string detail);

  [[nodiscard]] ErrorKind kind() const { return kind_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }
  [[nodiscard]] std::string formal() const;

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace plf
