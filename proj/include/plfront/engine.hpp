// SPDX-License-Identifier: Apache-2.0
//
// Post-processing of parsed sentences. Every sentence the reader produces is
// handed to an EngineChain, which passes it to each handler in order:
//
//   DirectiveEngine  executes `:- Goal.` (op/3, module/2, use_module/1,2 ...)
//   StorageEngine    stores clauses, facts and grammar rules in the database
//   QueryEngine      answers queries in the read-eval loop
//
// consult_text() is the usual entry point: it reads a file sentence by
// sentence and dispatches each one before reading the next, so directives
// change how the rest of the file is read.

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plfront/database.hpp"
#include "plfront/reader.hpp"
#include "plfront/solver.hpp"

namespace plf {

class EngineChain;
class Loader;

/// One use_module/ensure_loaded directive as seen in a file.
struct ImportRecord {
  std::string target;  // printed spec, e.g. `library(lists)` or `b`
  bool library = false;
  std::optional<std::filesystem::path> resolved;  // absolute path when found
  std::string path;  // relative path text of a file spec, empty for libraries
  std::optional<std::vector<PredicateIndicator>> names;  // nullopt = all exports
  SourceSpan span;            // the file argument
  SourceSpan directive_span;  // the whole directive sentence
};

struct DeclaredOperator {
  OperatorDef def;
  SourceSpan span;
};

/// Per-file state shared by the handlers while a file is consulted.
struct LoadContext {
  std::filesystem::path file;  // empty for interactive input
  FileId file_id;
  Loader* loader = nullptr;
  EngineChain* chain = nullptr;  // for include/1
  /// When false, missing import targets are left for a later link step to
  /// report instead of producing diagnostics here.
  bool report_missing_imports = true;

  std::vector<ImportRecord> imports;
  std::vector<DeclaredOperator> operators;
  std::set<std::filesystem::path> included;
  int include_depth = 0;
};

class EngineHandler {
 public:
  virtual ~EngineHandler() = default;
  /// Called once for every sentence, in source order. Diagnostics go to
  /// `diags`; handlers must not throw.
  virtual void handle(const Sentence& sentence, Database& db, LoadContext& ctx,
                      std::vector<Diagnostic>& diags) = 0;
};

class EngineChain {
 public:
  EngineChain& add(std::unique_ptr<EngineHandler> handler);

  /// Runs every handler on `sentence`. Exceptions escaping a handler are
  /// turned into diagnostics on the sentence span.
  std::vector<Diagnostic> dispatch(const Sentence& sentence, Database& db, LoadContext& ctx);

  [[nodiscard]] std::size_t size() const { return handlers_.size(); }

 private:
  std::vector<std::unique_ptr<EngineHandler>> handlers_;
};

class DirectiveEngine : public EngineHandler {
 public:
  void handle(const Sentence& sentence, Database& db, LoadContext& ctx,
              std::vector<Diagnostic>& diags) override;
};

class StorageEngine : public EngineHandler {
 public:
  void handle(const Sentence& sentence, Database& db, LoadContext& ctx,
              std::vector<Diagnostic>& diags) override;
};

/// Chain with DirectiveEngine followed by StorageEngine.
EngineChain make_consult_chain();

/// Executes the goal of a directive. Recognized: op/3, module/2,
/// use_module/1,2, ensure_loaded/1, include/1, dynamic/1, discontiguous/1,
/// set_prolog_flag/2 and conjunctions of these. Anything else is reported as
/// an unknown_directive warning.
std::vector<Diagnostic> exec_directive(const Term& goal, Database& db, LoadContext& ctx,
                                       const SourceSpan& directive_span);

/// Result of consulting one source text.
struct ConsultResult {
  std::vector<Sentence> sentences;
  std::vector<Diagnostic> diagnostics;
};

/// Tokenizes `text` and dispatches each sentence through `chain` before
/// reading the next one.
ConsultResult consult_text(std::string_view text, Database& db, EngineChain& chain,
                           LoadContext& ctx);

/// What importing a file makes visible.
struct LoadedFile {
  std::filesystem::path path;
  std::optional<ModuleInfo> module;
  std::vector<OperatorDef> operators;  // every op/3 directive in the file
  std::set<PredicateIndicator> defined;  // clause heads (DCG: arity + 2)
  std::vector<Diagnostic> diagnostics;

  /// Operators an importer sees: the export list of a module, or every
  /// operator of a plain file.
  [[nodiscard]] const std::vector<OperatorDef>& visible_operators() const;
};

/// Resolves import specs and consults targets for their directives only.
/// Results are cached per path; import cycles are cut.
class Loader {
 public:
  explicit Loader(std::vector<std::filesystem::path> library_paths = {});

  struct Resolution {
    bool library = false;
    std::optional<std::filesystem::path> path;
  };

  /// `spec` is the argument of use_module/ensure_loaded/include; relative
  /// names resolve against `from_dir`, `library(X)` against the library paths.
  /// A `.pl` extension is tried when the name has none.
  [[nodiscard]] Resolution resolve(const Term& spec, const std::filesystem::path& from_dir) const;

  /// Loads (or returns the cached) file. nullptr when it cannot be read.
  const LoadedFile* load(const std::filesystem::path& path);

  [[nodiscard]] const std::vector<std::filesystem::path>& library_paths() const {
    return library_paths_;
  }

 private:
  std::vector<std::filesystem::path> library_paths_;
  std::map<std::filesystem::path, std::unique_ptr<LoadedFile>> cache_;
  std::set<std::filesystem::path> in_progress_;
};

/// Text of an import spec as written in ModuleImport::target.
std::string import_spec_text(const Term& spec);

struct ReplOptions {
  SolveLimits limits;
  Loader* loader = nullptr;
};

/// Interactive read-eval loop. Prints the prompt "?- ", reads sentences,
/// executes directives and answers queries: each solution prints its
/// bindings as `Var = Term` lines followed by `true`; a line containing only
/// `;` asks for the next solution; `false` is printed when there are no
/// (more) solutions. Returns 0 at end of input.
int repl(Database& db, std::istream& in, std::ostream& out, const ReplOptions& options = {});

}  // namespace plf
