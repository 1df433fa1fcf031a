// SPDX-License-Identifier: Apache-2.0

#include "plfront/engine.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "plfront/error.hpp"
#include "plfront/lexer.hpp"
#include "plfront/printer.hpp"

namespace plf {

namespace fs = std::filesystem;

namespace {

bool is_query(const Term& t) { return t.is("?-", 1); }

Diagnostic directive_error(std::string message, const SourceSpan& span) {
  return make_diagnostic(Severity::Error, codes::kDirectiveError, std::move(message), span);
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

// Path text of an import spec: atoms, strings and a/b/c segments.
std::optional<std::string> path_text(const Term& t) {
  if (t.kind == TermKind::Atom || t.kind == TermKind::Str) return t.name;
  if (t.is("/", 2)) {
    auto a = path_text(t.arg(0));
    auto b = path_text(t.arg(1));
    if (a && b) return *a + "/" + *b;
  }
  return std::nullopt;
}

std::optional<fs::path> existing_file(const fs::path& p) {
  std::error_code ec;
  auto check = [&](const fs::path& q) -> std::optional<fs::path> {
    if (fs::is_regular_file(q, ec)) return fs::weakly_canonical(q, ec);
    return std::nullopt;
  };
  if (auto found = check(p)) return found;
  if (!p.has_extension()) {
    fs::path with = p;
    with += ".pl";
    return check(with);
  }
  return std::nullopt;
}

// Parses op(P, T, Names) into definitions. Appends errors to `diags`.
std::vector<std::pair<OperatorDef, SourceSpan>> op_definitions(const Term& goal,
                                                               std::vector<Diagnostic>& diags) {
  std::vector<std::pair<OperatorDef, SourceSpan>> out;
  const Term prio = goal.arg(0);
  const Term type = goal.arg(1);
  const Term names = goal.arg(2);
  if (prio.kind != TermKind::Int || prio.int_value < 0 || prio.int_value > 1200) {
    diags.push_back(directive_error("operator priority must be an integer in 0..1200", prio.span));
    return out;
  }
  std::optional<Fixity> fixity;
  if (type.is_atom()) fixity = parse_fixity(type.name);
  if (!fixity) {
    diags.push_back(directive_error("invalid operator type", type.span));
    return out;
  }
  std::vector<Term> items;
  if (auto elems = list_elements(names)) {
    items = std::move(*elems);
  } else {
    items.push_back(names);
  }
  for (const Term& n : items) {
    if (!n.is_atom()) {
      diags.push_back(directive_error("operator name must be an atom", n.span));
      continue;
    }
    out.push_back({OperatorDef{n.name, static_cast<int>(prio.int_value), *fixity}, n.span});
  }
  return out;
}

void add_operator(Database& db, const OperatorDef& def, const SourceSpan& span,
                  std::vector<Diagnostic>& diags) {
  try {
    db.operators().add(def);
  } catch (const PrologError& e) {
    diags.push_back(directive_error("cannot define operator: " + e.formal(), span));
  }
}

void exec_op(const Term& goal, Database& db, LoadContext& ctx, std::vector<Diagnostic>& diags) {
  for (auto& [def, span] : op_definitions(goal, diags)) {
    std::size_t before = diags.size();
    add_operator(db, def, span, diags);
    if (diags.size() == before) ctx.operators.push_back({def, span});
  }
}

void exec_module(const Term& goal, Database& db, LoadContext& ctx,
                 std::vector<Diagnostic>& diags) {
  const Term name = goal.arg(0);
  if (!name.is_atom()) {
    diags.push_back(directive_error("module name must be an atom", name.span));
    return;
  }
  auto exports = list_elements(goal.arg(1));
  if (!exports) {
    diags.push_back(directive_error("export list must be a proper list", goal.arg(1).span));
    return;
  }
  ModuleInfo info;
  info.name = name.name;
  info.defining_file = ctx.file_id;
  if (db.module()) info.imports = db.module()->imports;
  for (const Term& e : *exports) {
    bool dcg = false;
    if (auto pi = indicator_from_term(e, &dcg)) {
      info.exports.insert(*pi);
      PredicateEntry& entry = db.declare(*pi);
      entry.properties.exported = true;
      if (dcg) entry.properties.dcg = true;
    } else if (e.is("op", 3)) {
      for (auto& [def, span] : op_definitions(e, diags)) {
        std::size_t before = diags.size();
        add_operator(db, def, span, diags);
        if (diags.size() == before) {
          info.exported_operators.push_back(def);
          ctx.operators.push_back({def, span});
        }
      }
    } else {
      diags.push_back(directive_error("invalid export " + canonical(e), e.span));
    }
  }
  db.module() = std::move(info);
}

// Import lists of use_module/2. Returns nullopt (with a diagnostic) when malformed.
struct ImportList {
  std::vector<PredicateIndicator> names;
  std::vector<std::string> operator_names;
  bool all = false;
};

std::optional<ImportList> import_list(const Term& t, std::vector<Diagnostic>& diags) {
  ImportList out;
  if (t.is("except", 1)) {
    out.all = true;
    return out;
  }
  auto elems = list_elements(t);
  if (!elems) {
    diags.push_back(directive_error("import list must be a proper list", t.span));
    return std::nullopt;
  }
  for (const Term& e : *elems) {
    Term item = e.is("as", 2) ? e.arg(0) : e;
    if (auto pi = indicator_from_term(item)) {
      out.names.push_back(*pi);
    } else if (item.is("op", 3) && item.arg(2).is_atom()) {
      out.operator_names.push_back(item.arg(2).name);
    } else {
      diags.push_back(directive_error("invalid import " + canonical(e), e.span));
      return std::nullopt;
    }
  }
  return out;
}

fs::path base_dir(const LoadContext& ctx) {
  if (!ctx.file.empty()) return ctx.file.parent_path();
  std::error_code ec;
  return fs::current_path(ec);
}

Loader::Resolution resolve_spec(const LoadContext& ctx, const Term& spec) {
  if (ctx.loader != nullptr) return ctx.loader->resolve(spec, base_dir(ctx));
  return Loader{}.resolve(spec, base_dir(ctx));
}

void exec_import(const Term& spec, const std::optional<Term>& list, bool once, Database& db,
                 LoadContext& ctx, const SourceSpan& directive_span,
                 std::vector<Diagnostic>& diags) {
  if (!path_text(spec) && !(spec.is("library", 1) && path_text(spec.arg(0)))) {
    diags.push_back(directive_error("invalid file specification " + canonical(spec), spec.span));
    return;
  }
  std::optional<ImportList> names;
  if (list) {
    names = import_list(*list, diags);
    if (!names) return;
  }
  Loader::Resolution res = resolve_spec(ctx, spec);

  ImportRecord rec;
  rec.target = import_spec_text(spec);
  rec.library = res.library;
  rec.resolved = res.path;
  if (!spec.is("library", 1)) rec.path = path_text(spec).value_or("");
  if (names && !names->all) rec.names = names->names;
  rec.span = spec.span;
  rec.directive_span = directive_span;

  if (once && res.path) {
    for (const ImportRecord& prior : ctx.imports) {
      if (prior.resolved == res.path) return;
    }
  }
  ctx.imports.push_back(rec);
  ModuleImport mi{rec.target, rec.names};
  if (db.module()) {
    db.module()->imports.push_back(std::move(mi));
  } else {
    db.file_imports().push_back(std::move(mi));
  }

  if (!res.path) {
    if (!ctx.report_missing_imports) return;
    if (res.library) {
      diags.push_back(make_diagnostic(Severity::Warning, codes::kUnresolvedImport,
                                      "library " + rec.target + " not found on the library path",
                                      spec.span));
    } else {
      diags.push_back(make_diagnostic(Severity::Error, codes::kFileNotFound,
                                      "cannot find file " + rec.target, spec.span));
    }
    return;
  }
  Loader fallback;
  Loader& loader = ctx.loader != nullptr ? *ctx.loader : fallback;
  const LoadedFile* loaded = loader.load(*res.path);
  if (loaded == nullptr) return;  // import cycle or unreadable; nothing to add
  for (const OperatorDef& def : loaded->visible_operators()) {
    if (names && !names->all) {
      bool listed = false;
      for (const auto& n : names->operator_names) listed = listed || n == def.name;
      if (!listed) continue;
    }
    add_operator(db, def, spec.span, diags);
  }
}

void exec_include(const Term& spec, Database& db, LoadContext& ctx,
                  const SourceSpan& directive_span, std::vector<Diagnostic>& diags) {
  Loader::Resolution res = resolve_spec(ctx, spec);
  if (!res.path) {
    diags.push_back(make_diagnostic(Severity::Error, codes::kFileNotFound,
                                    "cannot find file " + import_spec_text(spec), spec.span));
    return;
  }
  if (ctx.included.count(*res.path) != 0 || ctx.include_depth >= 32 || *res.path == ctx.file) {
    diags.push_back(directive_error("recursive include of " + res.path->string(), spec.span));
    return;
  }
  auto text = read_file(*res.path);
  if (!text) {
    diags.push_back(make_diagnostic(Severity::Error, codes::kUnreadableFile,
                                    "cannot read " + res.path->string(), spec.span));
    return;
  }
  if (ctx.chain == nullptr) {
    diags.push_back(directive_error("include/1 needs an engine chain", directive_span));
    return;
  }
  ctx.included.insert(*res.path);
  ++ctx.include_depth;
  ConsultResult inner = consult_text(*text, db, *ctx.chain, ctx);
  --ctx.include_depth;
  // Spans inside the included text belong to another file; report at the
  // directive with the original position in the message.
  for (const Diagnostic& d : inner.diagnostics) {
    Diagnostic moved = d;
    moved.message = res.path->filename().string() + ":" + std::to_string(d.span.start_line) +
                    ":" + std::to_string(d.span.start_col) + ": " + d.message;
    moved.span = spec.span;
    moved.related.clear();
    diags.push_back(std::move(moved));
  }
}

void exec_property(const Term& goal, bool dynamic, Database& db,
                   std::vector<Diagnostic>& diags) {
  for (const Term& item : flatten_sequence(goal.arg(0))) {
    bool dcg = false;
    auto pi = indicator_from_term(item, &dcg);
    if (!pi) {
      diags.push_back(directive_error("expected a predicate indicator, found " + canonical(item),
                                      item.span));
      continue;
    }
    PredicateEntry& entry = db.declare(*pi);
    if (dynamic) {
      entry.properties.dynamic = true;
    } else {
      entry.properties.discontiguous = true;
    }
    if (dcg) entry.properties.dcg = true;
  }
}

void exec_flag(const Term& goal, Database& db, std::vector<Diagnostic>& diags) {
  const Term flag = goal.arg(0);
  const Term value = goal.arg(1);
  if (!flag.is_atom()) {
    diags.push_back(directive_error("flag name must be an atom", flag.span));
    return;
  }
  std::string text;
  if (value.is_atom()) {
    text = value.name;
  } else if (value.kind == TermKind::Int) {
    text = std::to_string(value.int_value);
  } else {
    diags.push_back(directive_error("flag value must be an atom or integer", value.span));
    return;
  }
  if (flag.name == "double_quotes" && text != "codes" && text != "chars" && text != "atom" &&
      text != "string") {
    diags.push_back(directive_error("double_quotes must be codes, chars, atom or string",
                                    value.span));
    return;
  }
  db.set_flag(flag.name, text);
}

void exec_goal(const Term& goal, Database& db, LoadContext& ctx, const SourceSpan& directive_span,
               std::vector<Diagnostic>& diags) {
  if (goal.is_var()) {
    diags.push_back(directive_error("directive is an unbound variable", goal.span));
    return;
  }
  if (goal.is(",", 2)) {
    exec_goal(goal.arg(0), db, ctx, directive_span, diags);
    exec_goal(goal.arg(1), db, ctx, directive_span, diags);
    return;
  }
  if (goal.is("op", 3)) return exec_op(goal, db, ctx, diags);
  if (goal.is("module", 2)) return exec_module(goal, db, ctx, diags);
  if (goal.is("use_module", 1)) {
    return exec_import(goal.arg(0), std::nullopt, false, db, ctx, directive_span, diags);
  }
  if (goal.is("use_module", 2)) {
    return exec_import(goal.arg(0), goal.arg(1), false, db, ctx, directive_span, diags);
  }
  if (goal.is("ensure_loaded", 1)) {
    return exec_import(goal.arg(0), std::nullopt, true, db, ctx, directive_span, diags);
  }
  if (goal.is("include", 1)) return exec_include(goal.arg(0), db, ctx, directive_span, diags);
  if (goal.is("dynamic", 1)) return exec_property(goal, true, db, diags);
  if (goal.is("discontiguous", 1)) return exec_property(goal, false, db, diags);
  if (goal.is("set_prolog_flag", 2)) return exec_flag(goal, db, diags);

  std::string what = goal.is_callable()
                         ? quote_atom(goal.functor()) + "/" + std::to_string(goal.arity())
                         : canonical(goal);
  diags.push_back(make_diagnostic(Severity::Warning, codes::kUnknownDirective,
                                  "unknown directive " + what, goal.span));
}

}  // namespace

std::string import_spec_text(const Term& spec) { return canonical(spec); }

EngineChain& EngineChain::add(std::unique_ptr<EngineHandler> handler) {
  handlers_.push_back(std::move(handler));
  return *this;
}

std::vector<Diagnostic> EngineChain::dispatch(const Sentence& sentence, Database& db,
                                              LoadContext& ctx) {
  std::vector<Diagnostic> diags;
  if (ctx.chain == nullptr) ctx.chain = this;
  for (auto& handler : handlers_) {
    try {
      handler->handle(sentence, db, ctx, diags);
    } catch (const PrologError& e) {
      diags.push_back(make_diagnostic(Severity::Error, codes::kInternalError, e.formal(),
                                      sentence.span));
    } catch (const std::exception& e) {
      diags.push_back(make_diagnostic(Severity::Error, codes::kInternalError, e.what(),
                                      sentence.span));
    }
  }
  return diags;
}

void DirectiveEngine::handle(const Sentence& sentence, Database& db, LoadContext& ctx,
                             std::vector<Diagnostic>& diags) {
  if (sentence.kind == SentenceKind::Directive) {
    auto out = exec_directive(sentence.goal(), db, ctx, sentence.span);
    diags.insert(diags.end(), out.begin(), out.end());
  }
}

void StorageEngine::handle(const Sentence& sentence, Database& db, LoadContext&,
                           std::vector<Diagnostic>& diags) {
  switch (sentence.kind) {
    case SentenceKind::Directive:
      return;
    case SentenceKind::Fact:
      if (is_query(sentence.term)) return;
      [[fallthrough]];
    case SentenceKind::Clause: {
      Term head = sentence.head();
      try {
        db.assert_clause(head, sentence.body(), sentence.span);
      } catch (const PrologError& e) {
        diags.push_back(make_diagnostic(Severity::Error, codes::kInvalidClause,
                                        "clause head is not callable: " + e.formal(),
                                        head.span));
      }
      return;
    }
    case SentenceKind::DcgRule: {
      Term head = sentence.head();
      if (!head.is_callable()) {
        diags.push_back(make_diagnostic(Severity::Error, codes::kInvalidClause,
                                        "grammar rule head is not callable", head.span));
        return;
      }
      PredicateEntry& entry =
          db.declare(PredicateIndicator{std::string(head.functor()), head.arity() + 2});
      entry.properties.dcg = true;
      entry.clauses.push_back(Clause{sentence.term.arg(0), sentence.body(), sentence.span});
      return;
    }
  }
}

EngineChain make_consult_chain() {
  EngineChain chain;
  chain.add(std::make_unique<DirectiveEngine>());
  chain.add(std::make_unique<StorageEngine>());
  return chain;
}

std::vector<Diagnostic> exec_directive(const Term& goal, Database& db, LoadContext& ctx,
                                       const SourceSpan& directive_span) {
  std::vector<Diagnostic> diags;
  exec_goal(goal, db, ctx, directive_span, diags);
  return diags;
}

ConsultResult consult_text(std::string_view text, Database& db, EngineChain& chain,
                           LoadContext& ctx) {
  ConsultResult out;
  if (ctx.chain == nullptr) ctx.chain = &chain;
  LexResult lexed = tokenize(text, ctx.file_id);
  out.diagnostics = std::move(lexed.diagnostics);
  Reader reader(lexed.tokens, ctx.file_id);
  while (auto r = reader.read_sentence(db)) {
    for (auto& d : r->diagnostics) out.diagnostics.push_back(std::move(d));
    if (!r->sentence) continue;
    for (auto& d : chain.dispatch(*r->sentence, db, ctx)) out.diagnostics.push_back(std::move(d));
    out.sentences.push_back(std::move(*r->sentence));
  }
  return out;
}

const std::vector<OperatorDef>& LoadedFile::visible_operators() const {
  return module ? module->exported_operators : operators;
}

Loader::Loader(std::vector<fs::path> library_paths) : library_paths_(std::move(library_paths)) {}

Loader::Resolution Loader::resolve(const Term& spec, const fs::path& from_dir) const {
  Resolution res;
  if (spec.is("library", 1)) {
    res.library = true;
    auto rel = path_text(spec.arg(0));
    if (!rel) return res;
    for (const fs::path& dir : library_paths_) {
      if (auto found = existing_file(dir / *rel)) {
        res.path = found;
        return res;
      }
    }
    return res;
  }
  auto rel = path_text(spec);
  if (!rel) return res;
  fs::path p(*rel);
  res.path = existing_file(p.is_absolute() ? p : from_dir / p);
  return res;
}

namespace {

// Records clause heads without storing the clauses.
class HeadCollector : public EngineHandler {
 public:
  explicit HeadCollector(std::set<PredicateIndicator>& out) : out_(out) {}
  void handle(const Sentence& sentence, Database&, LoadContext&,
              std::vector<Diagnostic>&) override {
    if (sentence.kind == SentenceKind::Directive || is_query(sentence.term)) return;
    Term head = sentence.head();
    if (!head.is_callable()) return;
    std::size_t extra = sentence.kind == SentenceKind::DcgRule ? 2 : 0;
    out_.insert(PredicateIndicator{std::string(head.functor()), head.arity() + extra});
  }

 private:
  std::set<PredicateIndicator>& out_;
};

}  // namespace

const LoadedFile* Loader::load(const fs::path& path) {
  std::error_code ec;
  fs::path key = fs::weakly_canonical(path, ec);
  if (ec) key = path;
  if (auto it = cache_.find(key); it != cache_.end()) return it->second.get();
  if (in_progress_.count(key) != 0) return nullptr;
  auto text = read_file(key);
  if (!text) return nullptr;

  in_progress_.insert(key);
  Database db;
  LoadContext ctx;
  ctx.file = key;
  ctx.loader = this;
  ctx.report_missing_imports = false;
  auto file = std::make_unique<LoadedFile>();
  EngineChain chain;
  chain.add(std::make_unique<DirectiveEngine>());
  chain.add(std::make_unique<HeadCollector>(file->defined));
  ConsultResult consulted = consult_text(*text, db, chain, ctx);
  in_progress_.erase(key);

  file->path = key;
  file->module = db.module();
  for (const DeclaredOperator& op : ctx.operators) file->operators.push_back(op.def);
  file->diagnostics = std::move(consulted.diagnostics);
  const LoadedFile* out = file.get();
  cache_[key] = std::move(file);
  return out;
}

// ---------------------------------------------------------------------------
// Read-eval loop

namespace {

// Line input with one line of push-back, so the `;` check can peek.
class LineSource {
 public:
  explicit LineSource(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (pushed_) {
      line = std::move(*pushed_);
      pushed_.reset();
      return true;
    }
    return static_cast<bool>(std::getline(in_, line));
  }
  void push(std::string line) { pushed_ = std::move(line); }

 private:
  std::istream& in_;
  std::optional<std::string> pushed_;
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class QueryEngine : public EngineHandler {
 public:
  QueryEngine(LineSource& lines, std::ostream& out, SolveLimits limits)
      : lines_(lines), out_(out), limits_(limits) {}

  void handle(const Sentence& sentence, Database& db, LoadContext&,
              std::vector<Diagnostic>&) override {
    if (sentence.kind == SentenceKind::Directive) return;
    Term goal = is_query(sentence.term) ? sentence.term.arg(0) : sentence.term;
    try {
      Solver solver(db, goal, limits_);
      while (true) {
        auto binding = solver.next();
        if (!binding) {
          out_ << "false\n";
          break;
        }
        for (const auto& [name, value] : *binding) {
          out_ << name << " = " << pretty_print(value, db) << '\n';
        }
        out_ << "true\n";
        std::string line;
        if (!lines_.next(line)) break;
        if (trim(line) != ";") {
          lines_.push(std::move(line));
          break;
        }
      }
      for (const std::string& w : solver.warnings()) out_ << "warning: " << w << '\n';
    } catch (const PrologError& e) {
      out_ << "error: " << e.formal() << '\n';
    }
  }

 private:
  LineSource& lines_;
  std::ostream& out_;
  SolveLimits limits_;
};

void print_diagnostic(std::ostream& out, const Diagnostic& d) {
  out << to_string(d.severity) << ": " << d.message << " (" << d.span.start_line << ':'
      << d.span.start_col << ")\n";
}

// True when the last significant token of `text` is a clause terminator.
bool complete_sentence(std::string_view text) {
  LexResult lexed = tokenize(text);
  for (auto it = lexed.tokens.rbegin(); it != lexed.tokens.rend(); ++it) {
    if (it->is_layout_or_comment()) continue;
    return it->kind == TokenKind::End;
  }
  return false;
}

}  // namespace

int repl(Database& db, std::istream& in, std::ostream& out, const ReplOptions& options) {
  LineSource lines(in);
  LoadContext ctx;
  ctx.loader = options.loader;
  EngineChain chain;
  chain.add(std::make_unique<DirectiveEngine>());
  chain.add(std::make_unique<QueryEngine>(lines, out, options.limits));
  ctx.chain = &chain;

  while (true) {
    out << "?- " << std::flush;
    std::string buffer;
    std::string line;
    bool eof = false;
    while (true) {
      if (!lines.next(line)) {
        eof = true;
        break;
      }
      buffer += line;
      buffer += '\n';
      if (complete_sentence(buffer)) break;
    }
    if (buffer.find_first_not_of(" \t\r\n") == std::string::npos) {
      if (eof) break;
      continue;
    }
    LexResult lexed = tokenize(buffer, ctx.file_id);
    for (const Diagnostic& d : lexed.diagnostics) print_diagnostic(out, d);
    Reader reader(lexed.tokens, ctx.file_id);
    while (auto r = reader.read_sentence(db)) {
      for (const Diagnostic& d : r->diagnostics) print_diagnostic(out, d);
      if (!r->sentence) continue;
      for (const Diagnostic& d : chain.dispatch(*r->sentence, db, ctx)) print_diagnostic(out, d);
    }
    if (eof) break;
  }
  out << '\n';
  return 0;
}

}  // namespace plf
