// SPDX-License-Identifier: Apache-2.0

#include "plfront/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <cctype>
#include <random>
#include <sstream>
#include <tuple>

#include "plfront/printer.hpp"
#include "plfront/solver.hpp"

namespace plf {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Small helpers

std::uint64_t fingerprint(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool glob_match(std::string_view glob, std::string_view rel) {
  if (glob.empty()) return rel.empty();
  if (glob.substr(0, 2) == "**") {
    std::string_view rest = glob.substr(2);
    if (!rest.empty() && rest.front() == '/') {
      // `**/` also matches zero directories.
      if (glob_match(rest.substr(1), rel)) return true;
    }
    for (std::size_t i = 0; i <= rel.size(); ++i) {
      if (glob_match(rest, rel.substr(i))) return true;
    }
    return false;
  }
  if (glob.front() == '*') {
    for (std::size_t i = 0; i <= rel.size(); ++i) {
      if (glob_match(glob.substr(1), rel.substr(i))) return true;
      if (i < rel.size() && rel[i] == '/') break;
    }
    return false;
  }
  if (rel.empty()) return false;
  if (glob.front() == '?') return rel.front() != '/' && glob_match(glob.substr(1), rel.substr(1));
  return glob.front() == rel.front() && glob_match(glob.substr(1), rel.substr(1));
}

std::string DefinedPredicate::label() const {
  if (dcg) return quote_atom(indicator.name) + "//" + std::to_string(indicator.arity - 2);
  return indicator.str();
}

const DefinedPredicate* FileIndex::find(const PredicateIndicator& pi) const {
  auto it = defined.find(pi.unqualified());
  return it == defined.end() ? nullptr : &it->second;
}

std::string_view to_string(OutlineKind kind) {
  switch (kind) {
    case OutlineKind::Module: return "module";
    case OutlineKind::ImportDirective: return "import";
    case OutlineKind::ExportedPredicate: return "exported";
    case OutlineKind::PrivatePredicate: return "private";
    case OutlineKind::DcgNonterminal: return "dcg";
  }
  return "private";
}

std::string_view to_string(CompletionKind kind) {
  switch (kind) {
    case CompletionKind::Predicate: return "predicate";
    case CompletionKind::Module: return "module";
    case CompletionKind::Dcg: return "dcg";
    case CompletionKind::Variable: return "variable";
    case CompletionKind::Keyword: return "keyword";
  }
  return "predicate";
}

namespace {

PredicateIndicator indicator_of(const Term& head, std::size_t extra = 0) {
  return PredicateIndicator{std::string(head.functor()), head.arity() + extra};
}

SourceSpan name_span_of(const Term& t) {
  return t.name_span.length() > 0 ? t.name_span : t.span;
}

// ---------------------------------------------------------------------------
// Phase II

class BodyWalker {
 public:
  BodyWalker(const SourceSpan& clause_span, std::vector<CallSite>& out)
      : clause_span_(clause_span), out_(out) {}

  void goal(const Term& g) {
    if (g.is_var() || !g.is_callable()) return;
    if (g.kind == TermKind::List || g.kind == TermKind::Curly) return;
    if (g.is(",", 2) || g.is(";", 2) || g.is("->", 2) || g.is("*->", 2)) {
      goal(g.arg(0));
      goal(g.arg(1));
      return;
    }
    if (g.is("\\+", 1)) return goal(g.arg(0));
    if (g.is(":", 2)) return;  // module-qualified: not resolved here
    record(g, indicator_of(g));
    if (g.is("call", 1) || g.is("once", 1) || g.is("ignore", 1) || g.is("not", 1)) {
      goal(g.arg(0));
    } else if (g.is("findall", 3) || g.is("findall", 4) || g.is("bagof", 3) ||
               g.is("setof", 3) || g.is("aggregate_all", 3)) {
      Term inner = g.arg(1);
      while (inner.is("^", 2)) inner = inner.arg(1);
      goal(inner);
    } else if (g.is("forall", 2)) {
      goal(g.arg(0));
      goal(g.arg(1));
    } else if (g.is("catch", 3)) {
      goal(g.arg(0));
      goal(g.arg(2));
    }
  }

  void dcg_body(const Term& g) {
    if (g.is_var()) return;
    if (g.kind == TermKind::List || g.kind == TermKind::Str || g.is_atom("[]") || g.is_atom("!")) {
      return;
    }
    if (!g.is_callable()) return;
    if (g.is(",", 2) || g.is(";", 2) || g.is("|", 2) || g.is("->", 2)) {
      dcg_body(g.arg(0));
      dcg_body(g.arg(1));
      return;
    }
    if (g.is("\\+", 1)) return dcg_body(g.arg(0));
    if (g.kind == TermKind::Curly) return goal(g.args[0]);
    if (g.is(":", 2)) return;
    record(g, indicator_of(g, 2));
  }

 private:
  void record(const Term& g, PredicateIndicator pi) {
    out_.push_back(CallSite{std::move(pi), name_span_of(g), clause_span_});
  }

  SourceSpan clause_span_;
  std::vector<CallSite>& out_;
};

void singleton_warnings(const Sentence& s, std::vector<Diagnostic>& out) {
  std::map<std::string, std::pair<int, SourceSpan>> seen;
  std::vector<std::string> order;
  visit(s.term, [&](const Term& t) {
    if (!t.is_var() || t.name.empty() || t.name.front() == '_') return;
    auto [it, fresh] = seen.try_emplace(t.name, 0, t.span);
    if (fresh) order.push_back(t.name);
    ++it->second.first;
  });
  for (const std::string& name : order) {
    const auto& [count, span] = seen[name];
    if (count == 1) {
      out.push_back(make_diagnostic(Severity::Warning, codes::kSingletonVariable,
                                    "singleton variable " + name, span));
    }
  }
}

void directive_info(const Term& goal, const SourceSpan& directive_span, FileIndex& idx) {
  if (goal.is(",", 2)) {
    directive_info(goal.arg(0), directive_span, idx);
    directive_info(goal.arg(1), directive_span, idx);
    return;
  }
  if (goal.is("use_module", 1) || goal.is("use_module", 2) || goal.is("ensure_loaded", 1)) {
    ImportRecord rec;
    Term spec = goal.arg(0);
    rec.target = import_spec_text(spec);
    rec.library = spec.is("library", 1);
    rec.span = spec.span;
    rec.directive_span = directive_span;
    if (goal.arity() == 2) {
      if (auto elems = list_elements(goal.arg(1))) {
        std::vector<PredicateIndicator> names;
        for (const Term& e : *elems) {
          if (auto pi = indicator_from_term(e.is("as", 2) ? e.arg(0) : e)) names.push_back(*pi);
        }
        rec.names = std::move(names);
      }
    }
    idx.imports.push_back(std::move(rec));
  } else if (goal.is("op", 3) && goal.arg(0).kind == TermKind::Int && goal.arg(1).is_atom()) {
    auto fixity = parse_fixity(goal.arg(1).name);
    if (!fixity) return;
    std::vector<Term> names;
    if (auto elems = list_elements(goal.arg(2))) {
      names = *elems;
    } else {
      names.push_back(goal.arg(2));
    }
    for (const Term& n : names) {
      if (!n.is_atom()) continue;
      idx.operators_declared.push_back(
          {OperatorDef{n.name, static_cast<int>(goal.arg(0).int_value), *fixity}, n.span});
    }
  }
}

}  // namespace

FileIndex index_file(const std::vector<Sentence>& sentences, const Database& db, FileId file) {
  FileIndex idx;
  idx.file = file;
  idx.module = db.module();
  std::optional<PredicateIndicator> last;
  std::set<PredicateIndicator> warned;
  for (const Sentence& s : sentences) {
    if (s.kind == SentenceKind::Directive) {
      Term goal = s.goal();
      if (goal.is("module", 2) && !idx.module_span) {
        idx.module_span = s.span;
        idx.export_list_span = goal.arg(1).span;
      }
      directive_info(goal, s.span, idx);
      continue;
    }
    if (s.term.is("?-", 1)) continue;
    Term head = s.head();
    if (!head.is_callable()) continue;
    const bool dcg = s.kind == SentenceKind::DcgRule;
    PredicateIndicator pi = indicator_of(head, dcg ? 2 : 0);
    auto [it, fresh] = idx.defined.try_emplace(pi);
    DefinedPredicate& def = it->second;
    if (fresh) {
      def.indicator = pi;
      def.dcg = dcg;
      def.first_head = head;
    } else if (last != pi && warned.count(pi) == 0) {
      const PredicateEntry* entry = db.lookup(pi);
      if (entry == nullptr || !entry->properties.discontiguous) {
        Diagnostic d = make_diagnostic(
            Severity::Warning, codes::kDiscontiguousClauses,
            "clauses of " + def.label() + " are not together in the source file",
            name_span_of(head));
        d.related.push_back({def.clause_spans.front(), "previous clause of " + def.label()});
        idx.diagnostics.push_back(std::move(d));
        warned.insert(pi);
      }
    }
    def.clause_spans.push_back(s.span);
    def.head_spans.push_back(name_span_of(head));
    last = pi;

    BodyWalker walker(s.span, idx.calls);
    if (s.kind == SentenceKind::Clause) walker.goal(s.body());
    if (dcg) walker.dcg_body(s.body());
    singleton_warnings(s, idx.diagnostics);
  }
  for (const auto& [pi, entry] : db.predicates()) {
    if (idx.defined.count(pi) == 0) idx.declared.insert(pi);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// ProjectModel

const SourceFile* ProjectModel::find_file(const fs::path& path) const {
  auto i = file_index(path);
  return i ? &files[*i] : nullptr;
}

std::optional<std::size_t> ProjectModel::file_index(const fs::path& path) const {
  if (auto it = global.files.find(path.generic_string()); it != global.files.end()) {
    return it->second;
  }
  std::error_code ec;
  fs::path abs = path.is_absolute() ? path : fs::absolute(path, ec);
  fs::path canon = fs::weakly_canonical(abs, ec);
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].path == canon || files[i].path == abs) return i;
  }
  fs::path under_root = fs::weakly_canonical(root / path, ec);
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].path == under_root) return i;
  }
  return std::nullopt;
}

// Falls back to the project's own file list when the target was not found on
// disk, as with in-memory sources.
std::optional<std::size_t> ProjectModel::import_target(const ImportRecord& rec) const {
  if (rec.resolved) {
    if (auto i = file_index(*rec.resolved)) return i;
  }
  if (rec.library || rec.path.empty()) return std::nullopt;
  const SourceFile* from = file(rec.span.file);
  if (from == nullptr) return std::nullopt;
  fs::path base = (fs::path(from->rel).parent_path() / rec.path).lexically_normal();
  for (const std::string& rel : {base.generic_string(), base.generic_string() + ".pl"}) {
    if (auto it = global.files.find(rel); it != global.files.end()) return it->second;
  }
  return std::nullopt;
}

const SourceFile* ProjectModel::file(FileId id) const {
  if (id.value == 0 || id.value > files.size()) return nullptr;
  return &files[id.value - 1];
}

std::string ProjectModel::path_of(FileId id) const {
  const SourceFile* f = file(id);
  return f != nullptr ? f->rel : std::string();
}

std::size_t ProjectModel::error_count() const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [](const Diagnostic& d) {
                                                  return d.severity == Severity::Error;
                                                }));
}

namespace {

struct Input {
  std::string rel;
  std::optional<std::string> text;
};

std::optional<std::string> read_whole(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

void attach_docs(SourceFile& f) {
  DocExtraction docs = extract_docs(f.sentences);
  f.docs = std::move(docs.blocks);
  for (std::size_t i = 0; i < f.docs.size(); ++i) {
    const DocTarget& t = f.docs[i].target;
    if (t.is_module) continue;
    auto it = f.index.defined.find(t.predicate);
    if (it != f.index.defined.end()) it->second.doc = i;
  }
  for (auto& d : docs.diagnostics) f.diagnostics.push_back(std::move(d));
}

void parse_file(SourceFile& f, const WorkspaceConfig& config) {
  f.fingerprint = fingerprint(f.text);
  f.lines = LineIndex(f.text);
  // A loader per file keeps each file's view of its imports independent of
  // the order in which files are processed.
  Loader loader(config.library_paths);
  LoadContext ctx;
  ctx.file = f.path;
  ctx.file_id = f.id;
  ctx.loader = &loader;
  ctx.report_missing_imports = false;
  EngineChain chain = make_consult_chain();
  ConsultResult r = consult_text(f.text, f.db, chain, ctx);
  f.sentences = std::move(r.sentences);
  f.diagnostics = std::move(r.diagnostics);
  f.tokens = tokenize(f.text, f.id).tokens;
  f.index = index_file(f.sentences, f.db, f.id);
  f.index.imports = ctx.imports;
  f.index.operators_declared = ctx.operators;
  for (const Diagnostic& d : f.index.diagnostics) f.diagnostics.push_back(d);
  attach_docs(f);
}

bool diagnostic_less(const ProjectModel& m, const Diagnostic& a, const Diagnostic& b) {
  auto key = [&](const Diagnostic& d) {
    return std::make_tuple(m.path_of(d.span.file), d.span.start_offset, d.span.end_offset,
                           static_cast<int>(d.severity), std::string_view(d.code),
                           std::string_view(d.message));
  };
  return key(a) < key(b);
}

ProjectModel build(const fs::path& root, std::vector<Input> inputs, const WorkspaceConfig& config) {
  ProjectModel model;
  std::error_code ec;
  model.root = fs::weakly_canonical(fs::absolute(root, ec), ec);
  model.config = config;

  std::vector<std::string> sorted;
  for (const Input& in : inputs) sorted.push_back(in.rel);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  model.files.resize(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    model.global.files[sorted[i]] = i;
    model.files[i].id = FileId{static_cast<std::uint32_t>(i + 1)};
    model.files[i].rel = sorted[i];
    model.files[i].path = fs::weakly_canonical(model.root / sorted[i], ec);
  }

  if (config.shuffle_seed) {
    std::mt19937_64 rng(*config.shuffle_seed);
    std::shuffle(inputs.begin(), inputs.end(), rng);
  }
  for (Input& in : inputs) {
    SourceFile& f = model.files[model.global.files[in.rel]];
    if (!in.text) {
      f.diagnostics.push_back(make_diagnostic(Severity::Error, codes::kUnreadableFile,
                                              "cannot read " + f.rel,
                                              LineIndex().span(f.id, 0, 0)));
      f.index.file = f.id;
      continue;
    }
    f.text = std::move(*in.text);
    parse_file(f, config);
  }

  std::vector<Diagnostic> linked = link(model);
  for (const SourceFile& f : model.files) {
    model.diagnostics.insert(model.diagnostics.end(), f.diagnostics.begin(), f.diagnostics.end());
  }
  model.diagnostics.insert(model.diagnostics.end(), linked.begin(), linked.end());
  std::stable_sort(model.diagnostics.begin(), model.diagnostics.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) {
                     return diagnostic_less(model, a, b);
                   });
  return model;
}

}  // namespace

ProjectModel build_project(const fs::path& root, const WorkspaceConfig& config) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw std::runtime_error("not a directory: " + root.string());
  }
  std::vector<Input> inputs;
  auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied,
                                             ec);
  for (; !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    const fs::directory_entry& entry = *it;
    std::string name = entry.path().filename().string();
    if (entry.is_directory(ec)) {
      if (!name.empty() && name.front() == '.') it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(ec)) continue;
    std::string rel = fs::relative(entry.path(), root, ec).generic_string();
    bool match = std::any_of(config.globs.begin(), config.globs.end(),
                             [&](const std::string& g) { return glob_match(g, rel); });
    if (match) inputs.push_back(Input{rel, read_whole(entry.path())});
  }
  return build(root, std::move(inputs), config);
}

ProjectModel build_sources(const std::map<std::string, std::string>& sources, const fs::path& root,
                           const WorkspaceConfig& config) {
  std::vector<Input> inputs;
  for (const auto& [rel, text] : sources) inputs.push_back(Input{rel, text});
  return build(root, std::move(inputs), config);
}

// ---------------------------------------------------------------------------
// Phase III

namespace {

std::optional<std::string> library_name(std::string_view target) {
  constexpr std::string_view kOpen = "library(";
  if (target.size() > kOpen.size() + 1 && target.substr(0, kOpen.size()) == kOpen &&
      target.back() == ')') {
    return std::string(target.substr(kOpen.size(), target.size() - kOpen.size() - 1));
  }
  return std::nullopt;
}

std::set<PredicateIndicator> file_level_exports(const FileIndex& idx) {
  std::set<PredicateIndicator> out;
  if (idx.module) return idx.module->exports;
  for (const auto& [pi, def] : idx.defined) out.insert(pi);
  out.insert(idx.declared.begin(), idx.declared.end());
  return out;
}

}  // namespace

std::vector<Diagnostic> link(ProjectModel& model) {
  std::vector<Diagnostic> out;
  const Catalog& cat = Catalog::bundled();
  model.global.exports.clear();
  model.imported.assign(model.files.size(), {});
  model.problems.clear();

  for (std::size_t i = 0; i < model.files.size(); ++i) {
    const SourceFile& f = model.files[i];
    const bool is_module = f.index.module.has_value();
    for (const PredicateIndicator& pi : file_level_exports(f.index)) {
      model.global.exports[pi].push_back(Exporter{f.rel, i, is_module});
    }
  }
  for (const CatalogEntry& e : cat.entries()) {
    if (e.builtin()) continue;
    model.global.exports[e.indicator].push_back(
        Exporter{"library(" + e.module + ")", std::nullopt, true});
  }
  for (auto& [pi, list] : model.global.exports) {
    std::sort(list.begin(), list.end(),
              [](const Exporter& a, const Exporter& b) { return a.target < b.target; });
  }

  for (std::size_t i = 0; i < model.files.size(); ++i) {
    const SourceFile& f = model.files[i];
    std::set<PredicateIndicator> visible;
    for (const auto& [pi, def] : f.index.defined) visible.insert(pi);
    for (const auto& [pi, entry] : f.db.predicates()) visible.insert(pi.unqualified());

    // Names already reported as not exported; calls to them stay quiet.
    std::set<PredicateIndicator> reported;
    Loader loader(model.config.library_paths);
    for (const ImportRecord& rec : f.index.imports) {
      std::optional<std::size_t> target;
      std::set<PredicateIndicator> available;
      bool known = false;
      target = model.import_target(rec);
      if (target) {
        known = true;
        available = file_level_exports(model.files[*target].index);
      } else if (rec.resolved) {
        if (const LoadedFile* lf = loader.load(*rec.resolved)) {
          known = true;
          available = lf->module ? lf->module->exports : lf->defined;
        }
      } else if (rec.library) {
        if (auto name = library_name(rec.target); name && cat.libraries().count(*name) != 0) {
          known = true;
          for (const CatalogEntry* e : cat.exports_of(*name)) available.insert(e->indicator);
        }
      }
      if (!known) {
        if (rec.library) {
          out.push_back(make_diagnostic(Severity::Warning, codes::kUnresolvedImport,
                                        "cannot resolve " + rec.target, rec.span));
        } else {
          out.push_back(make_diagnostic(Severity::Error, codes::kUnresolvedImport,
                                        "cannot find file " + rec.target, rec.span));
        }
        continue;
      }
      auto add = [&](const PredicateIndicator& pi) {
        model.imported[i].push_back(ImportedPredicate{pi, rec.target, target});
      };
      if (rec.names) {
        for (const PredicateIndicator& pi : *rec.names) {
          if (available.count(pi.unqualified()) != 0) {
            add(pi.unqualified());
            continue;
          }
          Diagnostic d = make_diagnostic(Severity::Error, codes::kNotExported,
                                         pi.str() + " is not exported by " + rec.target,
                                         rec.span);
          out.push_back(d);
          reported.insert(pi.unqualified());
          model.problems.push_back(LinkProblem{d, i, pi.unqualified(), target});
        }
      } else {
        for (const PredicateIndicator& pi : available) add(pi);
      }
    }

    std::set<PredicateIndicator> imported;
    for (const ImportedPredicate& ip : model.imported[i]) imported.insert(ip.indicator);

    for (const CallSite& call : f.index.calls) {
      const PredicateIndicator& pi = call.callee;
      if (visible.count(pi) != 0 || imported.count(pi) != 0 || reported.count(pi) != 0 ||
          cat.is_builtin(pi)) {
        continue;
      }
      Diagnostic d = make_diagnostic(Severity::Error, codes::kUndefinedPredicate,
                                     "unknown predicate " + pi.str(), call.span);
      std::set<PredicateIndicator> neighbours;
      auto consider = [&](const PredicateIndicator& other) {
        if (other.name == pi.name && other.arity != pi.arity) neighbours.insert(other);
      };
      for (const auto& other : visible) consider(other);
      for (const auto& other : imported) consider(other);
      for (const CatalogEntry& e : cat.entries()) {
        if (e.builtin()) consider(e.indicator);
      }
      for (const PredicateIndicator& n : neighbours) {
        const DefinedPredicate* def = f.index.find(n);
        d.related.push_back(
            {def != nullptr ? def->clause_spans.front() : call.span, "did you mean " + n.str()});
      }
      if (auto it = model.global.exports.find(pi); it != model.global.exports.end()) {
        for (const Exporter& e : it->second) {
          if (e.file == i) continue;
          d.related.push_back({call.span, pi.str() + " is available from " + e.target});
        }
      }
      out.push_back(d);
      model.problems.push_back(LinkProblem{d, i, pi, std::nullopt});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Outline

std::optional<std::vector<OutlineItem>> outline(const ProjectModel& model, const fs::path& file) {
  const SourceFile* f = model.find_file(file);
  if (f == nullptr) return std::nullopt;
  std::vector<OutlineItem> items;
  const FileIndex& idx = f->index;
  if (idx.module && idx.module_span) {
    items.push_back({OutlineKind::Module, idx.module->name, *idx.module_span, {}});
  }
  for (const ImportRecord& rec : idx.imports) {
    items.push_back({OutlineKind::ImportDirective, rec.target, rec.directive_span, {}});
  }
  for (const auto& [pi, def] : idx.defined) {
    OutlineKind kind = OutlineKind::PrivatePredicate;
    if (def.dcg) {
      kind = OutlineKind::DcgNonterminal;
    } else if (idx.module && idx.module->exports.count(pi) != 0) {
      kind = OutlineKind::ExportedPredicate;
    }
    items.push_back({kind, def.label(), def.clause_spans.front(), {}});
  }
  std::stable_sort(items.begin(), items.end(), [](const OutlineItem& a, const OutlineItem& b) {
    return a.target_span.start_offset < b.target_span.start_offset;
  });
  return items;
}

// ---------------------------------------------------------------------------
// Hover

namespace {

struct Located {
  const SourceFile* file = nullptr;
  const DefinedPredicate* def = nullptr;
  const CatalogEntry* entry = nullptr;
};

Located locate(const ProjectModel& model, std::size_t fi, const PredicateIndicator& pi) {
  Located loc;
  const SourceFile& f = model.files[fi];
  if (const DefinedPredicate* d = f.index.find(pi)) return {&f, d, nullptr};
  for (const ImportedPredicate& ip : model.imported[fi]) {
    if (ip.indicator != pi) continue;
    if (ip.file) {
      const SourceFile& t = model.files[*ip.file];
      if (const DefinedPredicate* d = t.index.find(pi)) return {&t, d, nullptr};
    }
  }
  loc.entry = Catalog::bundled().find(pi);
  return loc;
}

std::string render_entries(const DocBlock& block) {
  std::string out;
  for (const auto& [tag, body] : block.entries) {
    if (!out.empty()) out += '\n';
    out += tag;
    // Continuation lines stay indented so they do not read as tags.
    std::size_t start = 0;
    for (std::size_t nl = body.find('\n'); start < body.size(); nl = body.find('\n', start)) {
      std::size_t len = nl == std::string::npos ? std::string::npos : nl - start;
      std::string_view line = std::string_view(body).substr(start, len);
      out += start == 0 ? " " : "\n  ";
      out += line;
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  return out;
}

std::string definition_text(const SourceFile& def_file, const DefinedPredicate& def,
                            const SourceFile& from) {
  std::string head = pretty_print(def.first_head, def_file.db);
  std::string text;
  const SourceSpan& first = def.clause_spans.front();
  bool has_body = false;
  for (const Sentence& s : def_file.sentences) {
    if (s.span == first) has_body = s.kind != SentenceKind::Fact;
  }
  if (def.dcg) {
    text = head + " --> ...";
  } else if (has_body) {
    text = head + " :- ...";
  } else {
    text = head + ".";
  }
  text += "\ndefined at line " + std::to_string(first.start_line);
  if (&def_file != &from) text += " of " + def_file.rel;
  return text;
}

std::optional<HoverInfo> predicate_hover(const ProjectModel& model, std::size_t fi,
                                         const PredicateIndicator& pi, HoverMode mode,
                                         const SourceSpan& token_span) {
  Located loc = locate(model, fi, pi);
  if (loc.def != nullptr) {
    if (mode == HoverMode::Doc) {
      if (!loc.def->doc) return std::nullopt;
      return HoverInfo{render_entries(loc.file->docs[*loc.def->doc]), loc.def->clause_spans.front()};
    }
    return HoverInfo{definition_text(*loc.file, *loc.def, model.files[fi]),
                     loc.def->clause_spans.front()};
  }
  if (loc.entry != nullptr && mode == HoverMode::Definition) {
    return HoverInfo{describe(*loc.entry), token_span};
  }
  return std::nullopt;
}

const DocBlock* module_doc(const SourceFile& f) {
  for (const DocBlock& b : f.docs) {
    if (b.target.is_module) return &b;
  }
  return nullptr;
}

std::optional<HoverInfo> import_hover(const ProjectModel& model, const ImportRecord& rec,
                                      HoverMode mode) {
  std::optional<std::size_t> target;
  target = model.import_target(rec);
  if (mode == HoverMode::Doc) {
    if (!target) return std::nullopt;
    const DocBlock* doc = module_doc(model.files[*target]);
    if (doc == nullptr) return std::nullopt;
    return HoverInfo{render_entries(*doc), rec.span};
  }
  std::vector<std::string> names;
  std::string title = rec.target;
  if (target) {
    const FileIndex& idx = model.files[*target].index;
    if (idx.module) title = "module " + idx.module->name + " (" + model.files[*target].rel + ")";
    for (const PredicateIndicator& pi : file_level_exports(idx)) {
      const DefinedPredicate* d = idx.find(pi);
      names.push_back(d != nullptr ? d->label() : pi.str());
    }
  } else if (auto lib = library_name(rec.target)) {
    for (const CatalogEntry* e : Catalog::bundled().exports_of(*lib)) {
      names.push_back(e->indicator.str());
    }
    if (names.empty()) return HoverInfo{rec.target + " is not available", rec.span};
  } else {
    return HoverInfo{rec.target + " is not available", rec.span};
  }
  std::string text = title + " exports:";
  for (const std::string& n : names) text += " " + n;
  if (names.empty()) text += " nothing";
  return HoverInfo{text, rec.span};
}

// Deepest node whose name token covers `offset`.
const Term* node_at(const Term& root, std::size_t offset) {
  const Term* best = nullptr;
  visit(root, [&](const Term& t) {
    bool named = t.kind == TermKind::Atom || t.kind == TermKind::Compound ||
                 t.kind == TermKind::OpApply;
    if (!named || !t.name_span.contains(offset)) return;
    if (best == nullptr || t.name_span.length() <= best->name_span.length()) best = &t;
  });
  return best;
}

std::string operator_text(const std::vector<OperatorDef>& defs) {
  std::string out;
  for (const OperatorDef& d : defs) {
    if (!out.empty()) out += '\n';
    out += render_op(d);
  }
  return out;
}

}  // namespace

std::optional<HoverInfo> hover(const ProjectModel& model, const fs::path& file, std::size_t offset,
                               HoverMode mode) {
  auto fi = model.file_index(file);
  if (!fi) return std::nullopt;
  const SourceFile& f = model.files[*fi];
  const Token* token = nullptr;
  for (const Token& t : f.tokens) {
    if (t.span.contains(offset)) {
      token = &t;
      break;
    }
  }
  if (token == nullptr || token->is_layout_or_comment()) return std::nullopt;

  const Sentence* sentence = nullptr;
  for (const Sentence& s : f.sentences) {
    if (s.span.contains(offset)) sentence = &s;
  }
  if (sentence == nullptr) return std::nullopt;

  for (const ImportRecord& rec : f.index.imports) {
    if (rec.span.contains(offset)) return import_hover(model, rec, mode);
  }
  const Term* node = node_at(sentence->term, offset);
  if (node == nullptr) return std::nullopt;

  // A user-declared operator shows its declaration even where it also names
  // a predicate.
  if (mode == HoverMode::Definition && node->kind == TermKind::OpApply && node->op &&
      std::any_of(f.index.operators_declared.begin(), f.index.operators_declared.end(),
                  [&](const DeclaredOperator& d) { return d.def.name == node->op->name; })) {
    return HoverInfo{render_op(*node->op), token->span};
  }
  for (const CallSite& call : f.index.calls) {
    if (!call.span.contains(offset)) continue;
    if (auto h = predicate_hover(model, *fi, call.callee, mode, token->span)) return h;
    break;
  }
  if (sentence->kind != SentenceKind::Directive && !sentence->term.is("?-", 1)) {
    Term head = sentence->head();
    if (head.is_callable() && name_span_of(head).contains(offset)) {
      std::size_t extra = sentence->kind == SentenceKind::DcgRule ? 2 : 0;
      return predicate_hover(model, *fi, indicator_of(head, extra), mode, token->span);
    }
  }
  if (sentence->kind == SentenceKind::Directive && f.index.module &&
      sentence->goal().is("module", 2) && sentence->goal().arg(0).span.contains(offset)) {
    if (mode == HoverMode::Doc) {
      const DocBlock* doc = module_doc(f);
      if (doc == nullptr) return std::nullopt;
      return HoverInfo{render_entries(*doc), sentence->span};
    }
    std::string text = "module " + f.index.module->name + " exports:";
    for (const PredicateIndicator& pi : f.index.module->exports) text += " " + pi.str();
    return HoverInfo{text, sentence->span};
  }
  if (mode == HoverMode::Definition) {
    if (node->kind == TermKind::OpApply && node->op) {
      return HoverInfo{render_op(*node->op), token->span};
    }
    if (node->kind == TermKind::Atom && f.db.operators().is_operator(node->name)) {
      return HoverInfo{operator_text(f.db.operators().definitions(node->name)), token->span};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Completion

namespace {

struct Candidate {
  CompletionItem item;
  int locality = 0;
};

std::string insert_text_for(const std::string& name, std::size_t arity) {
  std::string out = quote_atom(name);
  if (arity == 0) return out;
  out += '(';
  for (std::size_t i = 0; i < arity; ++i) {
    if (i > 0) out += ", ";
    out += "_";
  }
  return out + ')';
}

std::string synopsis_of(const SourceFile& f, const DefinedPredicate& def) {
  return pretty_print_fresh(def.first_head, f.db.operators());
}

bool ident_char(char c) { return is_alnum_char(c); }

const std::vector<std::string_view> kDirectiveKeywords = {
    "module", "use_module", "ensure_loaded", "include", "dynamic", "discontiguous", "op",
    "set_prolog_flag"};

}  // namespace

std::vector<CompletionItem> complete(const ProjectModel& model, const fs::path& file,
                                     std::size_t offset) {
  auto fi = model.file_index(file);
  if (!fi) return {};
  const SourceFile& f = model.files[*fi];
  if (offset > f.text.size()) return {};
  std::size_t begin = offset;
  while (begin > 0 && ident_char(f.text[begin - 1])) --begin;
  const std::string prefix = f.text.substr(begin, offset - begin);

  // The region between the surrounding clause terminators.
  std::size_t region_start = 0;
  std::size_t region_end = f.text.size();
  for (const Token& t : f.tokens) {
    if (t.kind != TokenKind::End) continue;
    if (t.span.end_offset <= begin) {
      region_start = t.span.end_offset;
    } else if (t.span.start_offset >= offset) {
      region_end = t.span.end_offset;
      break;
    }
  }
  std::string_view region(f.text);
  region = region.substr(region_start, region_end - region_start);
  std::size_t lead = region.find_first_not_of(" \t\r\n");
  bool in_directive = lead != std::string_view::npos && region.substr(lead, 2) == ":-";

  bool in_import = false;
  for (const ImportRecord& rec : f.index.imports) {
    if (rec.span.start_offset <= begin && offset <= rec.span.end_offset) in_import = true;
  }
  if (!in_import && in_directive) {
    std::string_view before = region.substr(0, begin - region_start);
    for (std::string_view kw : {"use_module(", "ensure_loaded("}) {
      std::size_t at = before.rfind(kw);
      if (at != std::string_view::npos && before.find(')', at) == std::string_view::npos &&
          before.find(',', at) == std::string_view::npos) {
        in_import = true;
      }
    }
  }

  std::vector<Candidate> pool;
  const Catalog& cat = Catalog::bundled();
  auto add_predicate = [&](const PredicateIndicator& pi, bool dcg, std::string synopsis,
                           int locality) {
    CompletionItem item;
    if (dcg) {
      item.label = quote_atom(pi.name) + "//" + std::to_string(pi.arity - 2);
      item.kind = CompletionKind::Dcg;
      item.insert_text = insert_text_for(pi.name, pi.arity - 2);
    } else {
      item.label = pi.str();
      item.kind = CompletionKind::Predicate;
      item.insert_text = insert_text_for(pi.name, pi.arity);
    }
    item.synopsis = std::move(synopsis);
    pool.push_back({std::move(item), locality});
  };

  const bool wants_variable = !prefix.empty() && (std::isupper(static_cast<unsigned char>(prefix[0])) != 0 || prefix[0] == '_');
  if (in_import) {
    for (const SourceFile& other : model.files) {
      if (&other == &f) continue;
      fs::path rel = fs::path(other.rel).lexically_relative(fs::path(f.rel).parent_path());
      rel.replace_extension();
      std::string label = rel.generic_string();
      std::string synopsis = other.index.module ? "module " + other.index.module->name : "file";
      pool.push_back({{label, CompletionKind::Module, synopsis, quote_atom(label)}, 0});
      if (other.index.module) {
        const std::string& name = other.index.module->name;
        pool.push_back({{name, CompletionKind::Module, "module in " + other.rel, quote_atom(name)}, 1});
      }
    }
    for (const std::string& lib : cat.libraries()) {
      std::string text = "library(" + lib + ")";
      pool.push_back({{lib, CompletionKind::Module, text, text}, 2});
    }
  } else if (wants_variable) {
    std::set<std::string> seen;
    for (const Token& t : f.tokens) {
      if (t.kind != TokenKind::Variable || t.text == "_" || t.text == prefix) continue;
      if (t.span.start_offset < region_start || t.span.start_offset >= region_end) continue;
      if (seen.insert(t.text).second) {
        pool.push_back({{t.text, CompletionKind::Variable, "variable", t.text}, 0});
      }
    }
  } else {
    for (const auto& [pi, def] : f.index.defined) add_predicate(pi, def.dcg, synopsis_of(f, def), 0);
    for (const ImportedPredicate& ip : model.imported[*fi]) {
      Located loc = locate(model, *fi, ip.indicator);
      std::string synopsis;
      bool dcg = false;
      if (loc.def != nullptr) {
        synopsis = synopsis_of(*loc.file, *loc.def);
        dcg = loc.def->dcg;
      } else if (loc.entry != nullptr) {
        synopsis = loc.entry->synopsis;
      }
      add_predicate(ip.indicator, dcg, synopsis, 1);
    }
    for (const CatalogEntry& e : cat.entries()) {
      if (e.builtin()) add_predicate(e.indicator, false, e.synopsis, 2);
    }
    for (const PredicateIndicator& pi : solver_builtins()) {
      if (cat.find(pi) == nullptr) add_predicate(pi, false, pi.str(), 2);
    }
    if (in_directive) {
      for (std::string_view kw : kDirectiveKeywords) {
        std::string k(kw);
        pool.push_back({{k, CompletionKind::Keyword, "directive", k}, 3});
      }
    }
  }

  auto name_of = [](const CompletionItem& item) -> std::string_view {
    if (item.kind == CompletionKind::Variable || item.kind == CompletionKind::Keyword ||
        item.kind == CompletionKind::Module) {
      return item.label;
    }
    std::string_view ins = item.insert_text;
    return ins.substr(0, ins.find('('));
  };
  std::vector<Candidate> matches;
  std::set<std::string> labels;
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    return a.locality < b.locality;
  });
  for (Candidate& c : pool) {
    std::string_view name = name_of(c.item);
    if (name.substr(0, prefix.size()) != prefix) continue;
    if (!labels.insert(c.item.label).second) continue;
    matches.push_back(std::move(c));
  }
  std::sort(matches.begin(), matches.end(), [&](const Candidate& a, const Candidate& b) {
    int ra = name_of(a.item) == prefix ? 0 : 1;
    int rb = name_of(b.item) == prefix ? 0 : 1;
    return std::tie(ra, a.locality, a.item.label) < std::tie(rb, b.locality, b.item.label);
  });
  std::vector<CompletionItem> out;
  for (Candidate& c : matches) {
    if (out.size() >= std::max<std::size_t>(1, model.config.completion_limit)) break;
    out.push_back(std::move(c.item));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quick fixes

namespace {

std::string indicator_text(const PredicateIndicator& pi) {
  return quote_atom(pi.name) + "/" + std::to_string(pi.arity);
}

TextEdit insertion(const SourceFile& f, std::size_t offset, std::string text) {
  return TextEdit{f.rel, f.lines.span(f.id, offset, offset), std::move(text), f.fingerprint};
}

}  // namespace

std::vector<QuickFix> quick_fixes(const Diagnostic& diagnostic, const ProjectModel& model) {
  std::vector<QuickFix> fixes;
  const LinkProblem* problem = nullptr;
  for (const LinkProblem& p : model.problems) {
    if (p.diagnostic.code == diagnostic.code && p.diagnostic.span == diagnostic.span &&
        p.diagnostic.message == diagnostic.message) {
      problem = &p;
      break;
    }
  }
  if (problem == nullptr) return fixes;
  const SourceFile& f = model.files[problem->file];
  const PredicateIndicator& pi = problem->predicate;

  if (diagnostic.code == codes::kUndefinedPredicate) {
    auto it = model.global.exports.find(pi);
    if (it == model.global.exports.end()) return fixes;
    std::optional<std::size_t> after;
    for (const Sentence& s : f.sentences) {
      if (s.kind == SentenceKind::Directive) after = s.span.end_offset;
    }
    for (const Exporter& e : it->second) {
      if (e.file == problem->file) continue;
      std::string spec;
      if (e.file) {
        fs::path rel = fs::path(e.target).lexically_relative(fs::path(f.rel).parent_path());
        rel.replace_extension();
        spec = quote_atom(rel.generic_string());
      } else {
        spec = e.target;
      }
      std::string directive = ":- use_module(" + spec + ", [" + indicator_text(pi) + "]).";
      QuickFix fix;
      fix.title = "Import " + pi.str() + " from " + e.target;
      fix.edits.push_back(after ? insertion(f, *after, "\n" + directive)
                                : insertion(f, 0, directive + "\n"));
      fix.fixes_code = diagnostic.code;
      fix.fixes_span = diagnostic.span;
      fixes.push_back(std::move(fix));
    }
  } else if (diagnostic.code == codes::kNotExported && problem->exporter_file) {
    const SourceFile& t = model.files[*problem->exporter_file];
    if (!t.index.export_list_span) return fixes;
    const SourceSpan& list = *t.index.export_list_span;
    std::string_view list_text = std::string_view(t.text).substr(list.start_offset, list.length());
    QuickFix fix;
    fix.title = "Export " + pi.str() + " from " + t.rel;
    if (list_text == "[]") {
      fix.edits.push_back(TextEdit{t.rel, list, "[" + indicator_text(pi) + "]", t.fingerprint});
    } else {
      fix.edits.push_back(insertion(t, list.end_offset - 1, ", " + indicator_text(pi)));
    }
    fix.fixes_code = diagnostic.code;
    fix.fixes_span = diagnostic.span;
    fixes.push_back(std::move(fix));
  }
  return fixes;
}

void apply_fix(const QuickFix& fix, std::map<std::string, std::string>& sources) {
  std::map<std::string, std::vector<const TextEdit*>> by_file;
  for (const TextEdit& e : fix.edits) {
    auto it = sources.find(e.file);
    if (it == sources.end()) throw StaleFixError("file not available: " + e.file);
    if (fingerprint(it->second) != e.fingerprint || e.span.end_offset > it->second.size() ||
        e.span.start_offset > e.span.end_offset) {
      throw StaleFixError("file changed since the fix was computed: " + e.file);
    }
    by_file[e.file].push_back(&e);
  }
  for (auto& [name, edits] : by_file) {
    std::stable_sort(edits.begin(), edits.end(), [](const TextEdit* a, const TextEdit* b) {
      return a->span.start_offset > b->span.start_offset;
    });
    std::string text = sources[name];
    for (const TextEdit* e : edits) {
      text.replace(e->span.start_offset, e->span.length(), e->replacement);
    }
    sources[name] = std::move(text);
  }
}

}  // namespace plf
