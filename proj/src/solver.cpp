// SPDX-License-Identifier: Apache-2.0

#include "plfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "plfront/error.hpp"
#include "plfront/printer.hpp"

namespace plf {

namespace detail {

struct Node {
  enum Kind { Atom, Int, Float, Str, Struct, Var } kind = Atom;
  std::string name;
  std::int64_t i = 0;
  double f = 0.0;
  std::size_t var = 0;
  std::vector<std::shared_ptr<const Node>> args;
  bool ground = true;
};

struct Frame {
  enum Special { None, Cut, NegCut } special = None;
  std::shared_ptr<const Node> goal;
  std::size_t depth = 0;
  std::size_t height = 0;
  std::shared_ptr<const Frame> next;
};

struct ChoicePoint {
  enum Kind { Clauses, Alternative } kind = Alternative;
  std::size_t trail_size = 0;
  std::size_t var_top = 0;
  std::shared_ptr<const Frame> alt;
  std::shared_ptr<const Node> goal;
  const PredicateEntry* pred = nullptr;
  std::size_t next_clause = 0;
  std::size_t depth = 0;
};

}  // namespace detail

using detail::ChoicePoint;
using detail::Frame;
using detail::Node;
using NodePtr = std::shared_ptr<const Node>;
using FramePtr = std::shared_ptr<const Frame>;

namespace {

NodePtr make_atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Atom;
  n->name = std::move(name);
  return n;
}

NodePtr make_int(std::int64_t v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Int;
  n->i = v;
  return n;
}

NodePtr make_float(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Float;
  n->f = v;
  return n;
}

NodePtr make_var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Var;
  n->var = index;
  n->ground = false;
  return n;
}

NodePtr make_struct(std::string name, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Struct;
  n->name = std::move(name);
  n->ground = std::all_of(args.begin(), args.end(), [](const NodePtr& a) { return a->ground; });
  n->args = std::move(args);
  return n;
}

FramePtr push_goal(NodePtr goal, std::size_t depth, FramePtr next) {
  auto f = std::make_shared<Frame>();
  f->goal = std::move(goal);
  f->depth = depth;
  f->next = std::move(next);
  return f;
}

FramePtr push_special(Frame::Special special, std::size_t height, FramePtr next) {
  auto f = std::make_shared<Frame>();
  f->special = special;
  f->height = height;
  f->next = std::move(next);
  return f;
}

std::string node_text(const NodePtr& n) {
  switch (n->kind) {
    case Node::Atom: return quote_atom(n->name);
    case Node::Int: return std::to_string(n->i);
    case Node::Float: return format_float(n->f);
    case Node::Str: return quote_string(n->name);
    case Node::Var: return "_G" + std::to_string(n->var);
    case Node::Struct: {
      std::string s = quote_atom(n->name) + "(";
      for (std::size_t k = 0; k < n->args.size(); ++k) {
        if (k > 0) s += ",";
        s += node_text(n->args[k]);
      }
      return s + ")";
    }
  }
  return {};
}

[[noreturn]] void type_error(std::string_view type, const NodePtr& culprit) {
  throw PrologError(ErrorKind::Type, std::string(type) + ", " + node_text(culprit));
}

[[noreturn]] void instantiation_error() { throw PrologError(ErrorKind::Instantiation, ""); }

[[noreturn]] void evaluation_error(std::string_view what) {
  throw PrologError(ErrorKind::Evaluation, std::string(what));
}

bool is_number(const NodePtr& n) { return n->kind == Node::Int || n->kind == Node::Float; }

double as_double(const NodePtr& n) {
  return n->kind == Node::Int ? static_cast<double>(n->i) : n->f;
}

}  // namespace

const std::vector<PredicateIndicator>& solver_builtins() {
  static const std::vector<PredicateIndicator> list = {
      {"true", 0},   {"fail", 0},  {"!", 0},      {",", 2},      {";", 2},       {"->", 2},
      {"=", 2},      {"\\=", 2},   {"is", 2},     {"=:=", 2},    {"=\\=", 2},    {"<", 2},
      {">", 2},      {"=<", 2},    {">=", 2},     {"==", 2},     {"\\==", 2},    {"atom", 1},
      {"var", 1},    {"nonvar", 1}, {"number", 1}, {"functor", 3}, {"arg", 3},    {"=..", 2},
      {"call", 1},   {"\\+", 1},
  };
  return list;
}

bool is_solver_builtin(std::string_view name, std::size_t arity) {
  const auto& list = solver_builtins();
  return std::any_of(list.begin(), list.end(), [&](const PredicateIndicator& pi) {
    return pi.arity == arity && pi.name == name;
  });
}

Solver::Solver(const Database& db, const Term& goal, SolveLimits limits)
    : db_(db), limits_(limits) {
  std::map<int, std::size_t> vars;
  NodePtr g = from_term(goal, vars);
  const std::size_t base = bindings_.size();
  bindings_.resize(base + vars.size());
  g = rename(g, base);
  // Report query variables in order of first appearance.
  std::map<std::size_t, std::string> by_index;
  visit(goal, [&](const Term& t) {
    if (t.kind == TermKind::Var && t.name != "_" && !t.name.empty() && t.name.front() != '_') {
      auto it = vars.find(t.var_id);
      if (it != vars.end() && by_index.emplace(it->second, t.name).second) {
        query_vars_.emplace_back(t.name, base + it->second);
      }
    }
  });
  goals_ = push_goal(std::move(g), 0, nullptr);
}

Solver::~Solver() = default;

NodePtr Solver::from_term(const Term& t, std::map<int, std::size_t>& vars) {
  switch (t.kind) {
    case TermKind::Atom:
      return make_atom(t.name);
    case TermKind::Int:
      return make_int(t.int_value);
    case TermKind::Float:
      return make_float(t.float_value);
    case TermKind::Str: {
      auto n = std::make_shared<Node>();
      n->kind = Node::Str;
      n->name = t.name;
      return n;
    }
    case TermKind::Var: {
      // Template variables are numbered locally; rename() shifts them.
      if (t.var_id < 0) {
        const int key = -1 - static_cast<int>(vars.size()) - 1'000'000;
        const std::size_t local = vars.size();
        vars.emplace(key, local);
        return make_var(local);
      }
      auto [it, inserted] = vars.try_emplace(t.var_id, vars.size());
      return make_var(it->second);
    }
    case TermKind::List:
    case TermKind::Curly:
    case TermKind::Compound:
    case TermKind::OpApply: {
      if (t.kind == TermKind::List) {
        NodePtr tail = from_term(t.args.back(), vars);
        for (std::size_t k = t.args.size() - 1; k-- > 0;) {
          tail = make_struct(".", {from_term(t.args[k], vars), tail});
        }
        return tail;
      }
      std::vector<NodePtr> args;
      args.reserve(t.args.size());
      for (const Term& a : t.args) args.push_back(from_term(a, vars));
      return make_struct(std::string(t.functor()), std::move(args));
    }
  }
  return make_atom("[]");
}

NodePtr Solver::rename(const NodePtr& n, std::size_t base) {
  if (n->ground) return n;
  if (n->kind == Node::Var) return make_var(base + n->var);
  std::vector<NodePtr> args;
  args.reserve(n->args.size());
  for (const NodePtr& a : n->args) args.push_back(rename(a, base));
  return make_struct(n->name, std::move(args));
}

std::size_t Solver::fresh_var() {
  bindings_.push_back(nullptr);
  return bindings_.size() - 1;
}

NodePtr Solver::deref(NodePtr n) const {
  while (n->kind == Node::Var && bindings_[n->var]) n = bindings_[n->var];
  return n;
}

void Solver::bind(std::size_t var, NodePtr value) {
  bindings_[var] = std::move(value);
  trail_.push_back(var);
}

void Solver::undo_to(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    bindings_[trail_.back()] = nullptr;
    trail_.pop_back();
  }
}

bool Solver::unify(NodePtr a, NodePtr b) {
  std::vector<std::pair<NodePtr, NodePtr>> stack{{std::move(a), std::move(b)}};
  while (!stack.empty()) {
    auto [x, y] = std::move(stack.back());
    stack.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    if (x->kind == Node::Var) {
      if (y->kind == Node::Var && y->var == x->var) continue;
      // Bind the younger variable to the older one so query variables stay
      // the representatives.
      if (y->kind == Node::Var && y->var > x->var) {
        bind(y->var, x);
      } else {
        bind(x->var, y);
      }
      continue;
    }
    if (y->kind == Node::Var) {
      bind(y->var, x);
      continue;
    }
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case Node::Atom:
      case Node::Str:
        if (x->name != y->name) return false;
        break;
      case Node::Int:
        if (x->i != y->i) return false;
        break;
      case Node::Float:
        if (!(x->f == y->f) && !(std::isnan(x->f) && std::isnan(y->f))) return false;
        break;
      case Node::Struct:
        if (x->name != y->name || x->args.size() != y->args.size()) return false;
        for (std::size_t k = x->args.size(); k-- > 0;) stack.emplace_back(x->args[k], y->args[k]);
        break;
      case Node::Var:
        break;
    }
  }
  return true;
}

bool Solver::identical(NodePtr a, NodePtr b) const {
  a = deref(a);
  b = deref(b);
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Var: return a->var == b->var;
    case Node::Atom:
    case Node::Str: return a->name == b->name;
    case Node::Int: return a->i == b->i;
    case Node::Float: return a->f == b->f;
    case Node::Struct:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t k = 0; k < a->args.size(); ++k) {
        if (!identical(a->args[k], b->args[k])) return false;
      }
      return true;
  }
  return false;
}

void Solver::cut_to(std::size_t height) {
  while (choicepoints_.size() > height) choicepoints_.pop_back();
}

std::optional<Binding> Solver::next() {
  while (!exhausted_) {
    if (solutions_ >= limits_.max_solutions) {
      exhausted_ = true;
      break;
    }
    bool found = false;
    if (!started_) {
      started_ = true;
      found = run();
    } else {
      found = backtrack() && run();
    }
    if (!found) {
      exhausted_ = true;
      break;
    }
    Binding binding;
    bool cyclic = false;
    std::map<std::size_t, std::string> names;
    for (const auto& [name, index] : query_vars_) {
      NodePtr v = deref(make_var(index));
      if (v->kind == Node::Var) names.emplace(v->var, name);
    }
    for (const auto& [name, index] : query_vars_) {
      std::vector<std::size_t> visiting;
      auto t = to_term(make_var(index), visiting);
      if (!t) {
        cyclic = true;
        break;
      }
      // Unbound variables take the name of the first query variable sharing them.
      std::function<void(Term&)> rename_vars = [&](Term& term) {
        if (term.kind == TermKind::Var) {
          auto it = names.find(static_cast<std::size_t>(term.var_id));
          if (it != names.end()) term.name = it->second;
        }
        for (Term& a : term.args) rename_vars(a);
      };
      rename_vars(*t);
      if (t->kind == TermKind::Var && t->name == name) continue;
      binding.emplace(name, std::move(*t));
    }
    if (cyclic) continue;
    ++solutions_;
    return binding;
  }
  return std::nullopt;
}

std::optional<Term> Solver::to_term(const NodePtr& start, std::vector<std::size_t>& visiting) const {
  NodePtr n = start;
  std::size_t pushed = 0;
  while (n->kind == Node::Var && bindings_[n->var]) {
    if (std::find(visiting.begin(), visiting.end(), n->var) != visiting.end()) {
      visiting.resize(visiting.size() - pushed);
      return std::nullopt;
    }
    visiting.push_back(n->var);
    ++pushed;
    n = bindings_[n->var];
  }
  std::optional<Term> out;
  switch (n->kind) {
    case Node::Atom: out = Term::make_atom(n->name); break;
    case Node::Int: out = Term::make_int(n->i); break;
    case Node::Float: out = Term::make_float(n->f); break;
    case Node::Str: out = Term::make_string(n->name); break;
    case Node::Var:
      out = Term::make_var("_G" + std::to_string(n->var), static_cast<int>(n->var));
      break;
    case Node::Struct: {
      std::vector<Term> args;
      for (const NodePtr& a : n->args) {
        auto t = to_term(a, visiting);
        if (!t) {
          visiting.resize(visiting.size() - pushed);
          return std::nullopt;
        }
        args.push_back(std::move(*t));
      }
      if (n->name == "." && args.size() == 2) {
        // Flatten list cells.
        std::vector<Term> elements{std::move(args[0])};
        Term tail = std::move(args[1]);
        while (tail.kind == TermKind::List) {
          for (std::size_t k = 0; k + 1 < tail.args.size(); ++k) elements.push_back(tail.args[k]);
          Term rest = tail.args.back();
          tail = std::move(rest);
        }
        out = Term::make_list(std::move(elements), std::move(tail));
      } else if (n->name == "{}" && args.size() == 1) {
        out = Term::make_curly(std::move(args[0]));
      } else {
        out = Term::make_compound(n->name, std::move(args));
      }
      break;
    }
  }
  visiting.resize(visiting.size() - pushed);
  return out;
}

bool Solver::backtrack() {
  while (!choicepoints_.empty()) {
    ChoicePoint& cp = choicepoints_.back();
    undo_to(cp.trail_size);
    bindings_.resize(cp.var_top);
    if (cp.kind == ChoicePoint::Alternative) {
      goals_ = cp.alt;
      choicepoints_.pop_back();
      return true;
    }
    if (resume_clauses(cp)) return true;
  }
  return false;
}

bool Solver::resume_clauses(ChoicePoint& cp) {
  // `cp` is always choicepoints_.back().
  const auto& clauses = cp.pred->clauses;
  while (cp.next_clause < clauses.size()) {
    const Clause* clause = &clauses[cp.next_clause++];
    auto it = compiled_.find(clause);
    if (it == compiled_.end()) {
      std::map<int, std::size_t> vars;
      NodePtr head = from_term(clause->head, vars);
      NodePtr body = from_term(clause->body, vars);
      clause_vars_[clause] = vars.size();
      it = compiled_.emplace(clause, std::make_pair(head, body)).first;
    }
    const std::size_t count = clause_vars_[clause];
    const std::size_t base = bindings_.size();
    bindings_.resize(base + count);
    NodePtr head = rename(it->second.first, base);
    if (unify(cp.goal, head)) {
      NodePtr body = rename(it->second.second, base);
      const std::size_t depth = cp.depth + 1;
      goals_ = push_goal(std::move(body), depth, cp.alt);
      if (cp.next_clause >= clauses.size()) choicepoints_.pop_back();
      return true;
    }
    undo_to(cp.trail_size);
    bindings_.resize(cp.var_top);
  }
  choicepoints_.pop_back();
  return false;
}

bool Solver::call_user(const NodePtr& goal, std::size_t depth, const FramePtr& rest) {
  const std::string& name = goal->name;
  const std::size_t arity = goal->kind == Node::Struct ? goal->args.size() : 0;
  const PredicateEntry* pred = db_.lookup(PredicateIndicator(name, arity));
  if (pred == nullptr) {
    throw PrologError(ErrorKind::Existence,
                      "procedure, " + PredicateIndicator(name, arity).str());
  }
  if (pred->clauses.empty()) return false;
  if (depth + 1 > limits_.max_depth) throw PrologError(ErrorKind::Resource, "depth");
  ChoicePoint cp;
  cp.kind = ChoicePoint::Clauses;
  cp.trail_size = trail_.size();
  cp.var_top = bindings_.size();
  cp.goal = goal;
  cp.pred = pred;
  cp.depth = depth;
  cp.alt = rest;
  choicepoints_.push_back(std::move(cp));
  return resume_clauses(choicepoints_.back());
}

bool Solver::run() {
  while (goals_) {
    FramePtr frame = goals_;
    goals_ = frame->next;
    bool ok = true;
    switch (frame->special) {
      case Frame::Cut:
        cut_to(frame->height);
        break;
      case Frame::NegCut:
        cut_to(frame->height);
        ok = false;
        break;
      case Frame::None:
        ok = step(frame->goal, frame->depth, frame->next);
        break;
    }
    if (!ok && !backtrack()) return false;
  }
  return true;
}

bool Solver::step(const NodePtr& goal_in, std::size_t depth, const FramePtr& rest) {
  if (++inferences_ > limits_.max_inferences) {
    throw PrologError(ErrorKind::Resource, "inferences");
  }
  const NodePtr goal = deref(goal_in);
  if (goal->kind == Node::Var) instantiation_error();
  if (goal->kind != Node::Atom && goal->kind != Node::Struct) type_error("callable", goal);
  const std::string& f = goal->name;
  const std::size_t n = goal->kind == Node::Struct ? goal->args.size() : 0;
  const auto arg = [&](std::size_t k) { return goal->args[k]; };

  if (n == 0) {
    if (f == "true") return true;
    if (f == "fail") return false;
    if (f == "!") {
      if (warnings_.empty() || warnings_.back() != "cut is treated as true") {
        warnings_.emplace_back("cut is treated as true");
      }
      return true;
    }
  } else if (n == 1) {
    if (f == "call") {
      goals_ = push_goal(arg(0), depth, rest);
      return true;
    }
    if (f == "\\+") {
      const std::size_t height = choicepoints_.size();
      ChoicePoint cp;
      cp.trail_size = trail_.size();
      cp.var_top = bindings_.size();
      cp.alt = rest;
      choicepoints_.push_back(std::move(cp));
      goals_ = push_goal(arg(0), depth, push_special(Frame::NegCut, height, nullptr));
      return true;
    }
    if (f == "atom") return deref(arg(0))->kind == Node::Atom;
    if (f == "var") return deref(arg(0))->kind == Node::Var;
    if (f == "nonvar") return deref(arg(0))->kind != Node::Var;
    if (f == "number") return is_number(deref(arg(0)));
  } else if (n == 2) {
    if (f == ",") {
      goals_ = push_goal(arg(0), depth, push_goal(arg(1), depth, rest));
      return true;
    }
    if (f == ";") {
      const NodePtr left = deref(arg(0));
      const std::size_t height = choicepoints_.size();
      ChoicePoint cp;
      cp.trail_size = trail_.size();
      cp.var_top = bindings_.size();
      cp.alt = push_goal(arg(1), depth, rest);
      choicepoints_.push_back(std::move(cp));
      if (left->kind == Node::Struct && left->name == "->" && left->args.size() == 2) {
        goals_ = push_goal(left->args[0], depth,
                           push_special(Frame::Cut, height,
                                        push_goal(left->args[1], depth, rest)));
      } else {
        goals_ = push_goal(left, depth, rest);
      }
      return true;
    }
    if (f == "->") {
      const std::size_t height = choicepoints_.size();
      goals_ = push_goal(arg(0), depth,
                         push_special(Frame::Cut, height, push_goal(arg(1), depth, rest)));
      return true;
    }
    if (f == "=") return unify(arg(0), arg(1));
    if (f == "\\=") {
      const std::size_t mark = trail_.size();
      const bool unifies = unify(arg(0), arg(1));
      undo_to(mark);
      return !unifies;
    }
    if (f == "==") return identical(arg(0), arg(1));
    if (f == "\\==") return !identical(arg(0), arg(1));
    if (f == "is") return unify(arg(0), eval(arg(1)));
    if (f == "=:=") return compare_numbers(eval(arg(0)), eval(arg(1))) == 0;
    if (f == "=\\=") return compare_numbers(eval(arg(0)), eval(arg(1))) != 0;
    if (f == "<") return compare_numbers(eval(arg(0)), eval(arg(1))) < 0;
    if (f == ">") return compare_numbers(eval(arg(0)), eval(arg(1))) > 0;
    if (f == "=<") return compare_numbers(eval(arg(0)), eval(arg(1))) <= 0;
    if (f == ">=") return compare_numbers(eval(arg(0)), eval(arg(1))) >= 0;
    if (f == "=..") return builtin_univ(arg(0), arg(1));
  } else if (n == 3) {
    if (f == "functor") return builtin_functor(arg(0), arg(1), arg(2));
    if (f == "arg") return builtin_arg(arg(0), arg(1), arg(2));
  }
  return call_user(goal, depth, rest);
}

NodePtr Solver::eval(const NodePtr& in) {
  const NodePtr n = deref(in);
  switch (n->kind) {
    case Node::Int:
    case Node::Float:
      return n;
    case Node::Var:
      instantiation_error();
    case Node::Str:
      type_error("evaluable", n);
    case Node::Atom:
      throw PrologError(ErrorKind::Type, "evaluable, " + quote_atom(n->name) + "/0");
    case Node::Struct:
      break;
  }
  const std::string& f = n->name;
  if (n->args.size() == 1 && f == "-") {
    const NodePtr x = eval(n->args[0]);
    if (x->kind == Node::Float) return make_float(-x->f);
    if (x->i == std::numeric_limits<std::int64_t>::min()) evaluation_error("int_overflow");
    return make_int(-x->i);
  }
  if (n->args.size() != 2) {
    throw PrologError(ErrorKind::Type,
                      "evaluable, " + quote_atom(f) + "/" + std::to_string(n->args.size()));
  }
  const NodePtr a = eval(n->args[0]);
  const NodePtr b = eval(n->args[1]);
  const bool ints = a->kind == Node::Int && b->kind == Node::Int;
  std::int64_t r = 0;
  if (f == "+" || f == "-" || f == "*") {
    if (ints) {
      const bool overflow = f == "+"   ? __builtin_add_overflow(a->i, b->i, &r)
                            : f == "-" ? __builtin_sub_overflow(a->i, b->i, &r)
                                       : __builtin_mul_overflow(a->i, b->i, &r);
      if (overflow) evaluation_error("int_overflow");
      return make_int(r);
    }
    const double x = as_double(a);
    const double y = as_double(b);
    return make_float(f == "+" ? x + y : f == "-" ? x - y : x * y);
  }
  if (f == "/") {
    if (ints) {
      if (b->i == 0) evaluation_error("zero_divisor");
      if (b->i == -1 && a->i == std::numeric_limits<std::int64_t>::min()) {
        evaluation_error("int_overflow");
      }
      if (a->i % b->i == 0) return make_int(a->i / b->i);
      return make_float(static_cast<double>(a->i) / static_cast<double>(b->i));
    }
    if (as_double(b) == 0.0) evaluation_error("zero_divisor");
    return make_float(as_double(a) / as_double(b));
  }
  if (f == "//" || f == "mod") {
    if (a->kind != Node::Int) type_error("integer", a);
    if (b->kind != Node::Int) type_error("integer", b);
    if (b->i == 0) evaluation_error("zero_divisor");
    if (b->i == -1) {
      if (f == "mod") return make_int(0);
      if (a->i == std::numeric_limits<std::int64_t>::min()) evaluation_error("int_overflow");
      return make_int(-a->i);
    }
    if (f == "//") return make_int(a->i / b->i);
    std::int64_t m = a->i % b->i;
    if (m != 0 && ((m < 0) != (b->i < 0))) m += b->i;
    return make_int(m);
  }
  throw PrologError(ErrorKind::Type, "evaluable, " + quote_atom(f) + "/2");
}

int Solver::compare_numbers(const NodePtr& a, const NodePtr& b) {
  if (a->kind == Node::Int && b->kind == Node::Int) return a->i < b->i ? -1 : a->i > b->i ? 1 : 0;
  const double x = as_double(a);
  const double y = as_double(b);
  return x < y ? -1 : x > y ? 1 : 0;
}

bool Solver::builtin_functor(const NodePtr& t_in, const NodePtr& name, const NodePtr& arity) {
  const NodePtr t = deref(t_in);
  if (t->kind == Node::Struct) {
    return unify(name, make_atom(t->name)) &&
           unify(arity, make_int(static_cast<std::int64_t>(t->args.size())));
  }
  if (t->kind != Node::Var) return unify(name, t) && unify(arity, make_int(0));
  const NodePtr nm = deref(name);
  const NodePtr ar = deref(arity);
  if (nm->kind == Node::Var || ar->kind == Node::Var) instantiation_error();
  if (ar->kind != Node::Int) type_error("integer", ar);
  if (ar->i < 0) throw PrologError(ErrorKind::Domain, "not_less_than_zero, " + node_text(ar));
  if (ar->i == 0) return unify(t, nm);
  if (nm->kind == Node::Struct) type_error("atomic", nm);
  if (nm->kind != Node::Atom) type_error("atom", nm);
  std::vector<NodePtr> args;
  for (std::int64_t k = 0; k < ar->i; ++k) args.push_back(make_var(fresh_var()));
  return unify(t, make_struct(nm->name, std::move(args)));
}

bool Solver::builtin_arg(const NodePtr& n_in, const NodePtr& t_in, const NodePtr& a) {
  const NodePtr n = deref(n_in);
  const NodePtr t = deref(t_in);
  if (n->kind == Node::Var || t->kind == Node::Var) instantiation_error();
  if (n->kind != Node::Int) type_error("integer", n);
  if (t->kind != Node::Struct) type_error("compound", t);
  if (n->i < 1 || static_cast<std::size_t>(n->i) > t->args.size()) return false;
  return unify(a, t->args[static_cast<std::size_t>(n->i - 1)]);
}

bool Solver::builtin_univ(const NodePtr& t_in, const NodePtr& list) {
  const NodePtr t = deref(t_in);
  if (t->kind != Node::Var) {
    std::vector<NodePtr> items;
    if (t->kind == Node::Struct) {
      items.push_back(make_atom(t->name));
      items.insert(items.end(), t->args.begin(), t->args.end());
    } else {
      items.push_back(t);
    }
    NodePtr l = make_atom("[]");
    for (std::size_t k = items.size(); k-- > 0;) l = make_struct(".", {items[k], l});
    return unify(list, l);
  }
  std::vector<NodePtr> items;
  NodePtr cur = deref(list);
  while (cur->kind == Node::Struct && cur->name == "." && cur->args.size() == 2) {
    items.push_back(deref(cur->args[0]));
    cur = deref(cur->args[1]);
  }
  if (cur->kind == Node::Var) instantiation_error();
  if (!(cur->kind == Node::Atom && cur->name == "[]")) type_error("list", deref(list));
  if (items.empty()) throw PrologError(ErrorKind::Domain, "non_empty_list, []");
  if (items[0]->kind == Node::Var) instantiation_error();
  if (items.size() == 1) return unify(t, items[0]);
  if (items[0]->kind != Node::Atom) type_error("atom", items[0]);
  std::vector<NodePtr> args(items.begin() + 1, items.end());
  return unify(t, make_struct(items[0]->name, std::move(args)));
}

std::vector<Binding> solve_all(const Database& db, const Term& goal, SolveLimits limits) {
  Solver solver(db, goal, limits);
  std::vector<Binding> out;
  while (auto b = solver.next()) out.push_back(std::move(*b));
  return out;
}

}  // namespace plf
