// SPDX-License-Identifier: Apache-2.0
//
// A small SLD resolution engine over a Database: depth-first, left to right,
// clauses in source order. It backs the read-eval loop and the unification
// tests, nothing more. Cut is accepted but behaves as true.
//
//   plf::Solver solver(db, goal, plf::SolveLimits{});
//   while (auto b = solver.next()) { ... }
//
// Errors (unknown predicate, instantiation, limits) surface as PrologError
// thrown from next().

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plfront/database.hpp"
#include "plfront/term.hpp"

namespace plf {

struct SolveLimits {
  std::size_t max_depth = 10'000;
  std::size_t max_solutions = 1'000'000;
  std::uint64_t max_inferences = 10'000'000;
};

/// Query variable name to its fully dereferenced value. Variables whose names
/// start with `_` are not reported.
using Binding = std::map<std::string, Term>;

namespace detail {
struct Node;
struct Frame;
struct ChoicePoint;
}  // namespace detail

/// Names of the predicates the solver implements itself.
const std::vector<PredicateIndicator>& solver_builtins();
bool is_solver_builtin(std::string_view name, std::size_t arity);

class Solver {
 public:
  Solver(const Database& db, const Term& goal, SolveLimits limits = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Next solution, or nullopt when the search space (or max_solutions) is
  /// exhausted. Solutions whose bindings are cyclic are skipped.
  std::optional<Binding> next();

  /// Warnings raised while solving (e.g. cut treated as true).
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] std::uint64_t inferences() const { return inferences_; }

 private:
  using NodePtr = std::shared_ptr<const detail::Node>;
  using FramePtr = std::shared_ptr<const detail::Frame>;

  NodePtr from_term(const Term& t, std::map<int, std::size_t>& vars);
  NodePtr rename(const NodePtr& n, std::size_t base);
  std::size_t fresh_var();
  NodePtr deref(NodePtr n) const;
  void bind(std::size_t var, NodePtr value);
  bool unify(NodePtr a, NodePtr b);
  void undo_to(std::size_t trail_size);
  bool identical(NodePtr a, NodePtr b) const;

  bool run();
  bool backtrack();
  bool step(const NodePtr& goal, std::size_t depth, const FramePtr& rest);
  bool call_user(const NodePtr& goal, std::size_t depth, const FramePtr& rest);
  bool resume_clauses(detail::ChoicePoint& cp);
  void cut_to(std::size_t height);

  NodePtr eval(const NodePtr& n);
  int compare_numbers(const NodePtr& a, const NodePtr& b);
  bool builtin_functor(const NodePtr& t, const NodePtr& name, const NodePtr& arity);
  bool builtin_arg(const NodePtr& n, const NodePtr& t, const NodePtr& a);
  bool builtin_univ(const NodePtr& t, const NodePtr& list);

  std::optional<Term> to_term(const NodePtr& n, std::vector<std::size_t>& visiting) const;

  const Database& db_;
  SolveLimits limits_;
  std::vector<NodePtr> bindings_;
  std::vector<std::size_t> trail_;
  std::vector<detail::ChoicePoint> choicepoints_;
  FramePtr goals_;
  std::vector<std::pair<std::string, std::size_t>> query_vars_;
  std::map<const Clause*, std::pair<NodePtr, NodePtr>> compiled_;
  std::map<const Clause*, std::size_t> clause_vars_;
  std::vector<std::string> warnings_;
  std::uint64_t inferences_ = 0;
  std::size_t solutions_ = 0;
  bool started_ = false;
  bool exhausted_ = false;
};

/// Convenience: all solutions (up to limits.max_solutions).
std::vector<Binding> solve_all(const Database& db, const Term& goal, SolveLimits limits = {});

}  // namespace plf
