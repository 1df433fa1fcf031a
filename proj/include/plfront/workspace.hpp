// SPDX-License-Identifier: Apache-2.0
//
// Project-wide analysis. build_project() runs four phases:
//
//   I    parse every source file with its own Database (engine chain)
//   II   index each file: definitions, call sites, imports, operators
//   III  link the indices: exports, imports, call resolution
//   IV   collect and sort all diagnostics
//
// The resulting ProjectModel is immutable and answers the editor-style
// queries below (outline, hover, completion, quick fixes). Output never
// depends on the order in which files were discovered.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "plfront/catalog.hpp"
#include "plfront/database.hpp"
#include "plfront/docgen.hpp"
#include "plfront/engine.hpp"
#include "plfront/lexer.hpp"
#include "plfront/reader.hpp"

namespace plf {

struct WorkspaceConfig {
  std::vector<std::string> globs{"**/*.pl"};
  std::vector<std::filesystem::path> library_paths;
  std::size_t completion_limit = 50;
  /// Test hook: when set, files are parsed in a pseudo-random order drawn
  /// from this seed instead of directory order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct DefinedPredicate {
  PredicateIndicator indicator;  // DCG: translated arity (source arity + 2)
  bool dcg = false;
  std::vector<SourceSpan> clause_spans;
  std::vector<SourceSpan> head_spans;
  Term first_head;  // DCG: the nonterminal as written
  std::optional<std::size_t> doc;  // index into SourceFile::docs

  /// `f/1`, or `s//0` for grammar rules.
  [[nodiscard]] std::string label() const;
};

struct CallSite {
  PredicateIndicator callee;
  SourceSpan span;  // the goal's name token
  SourceSpan clause_span;
};

struct FileIndex {
  FileId file;
  std::optional<ModuleInfo> module;
  std::optional<SourceSpan> module_span;       // the module/2 directive
  std::optional<SourceSpan> export_list_span;  // its export list
  std::map<PredicateIndicator, DefinedPredicate> defined;
  std::vector<CallSite> calls;
  std::vector<ImportRecord> imports;
  std::vector<DeclaredOperator> operators_declared;
  /// Predicates declared by dynamic/discontiguous without clauses here.
  std::set<PredicateIndicator> declared;
  std::vector<Diagnostic> diagnostics;  // singleton and discontiguous warnings

  [[nodiscard]] const DefinedPredicate* find(const PredicateIndicator& pi) const;
};

/// Phase II for one file.
FileIndex index_file(const std::vector<Sentence>& sentences, const Database& db, FileId file);

struct SourceFile {
  FileId id;
  std::filesystem::path path;  // absolute
  std::string rel;             // relative to the root, '/' separated
  std::string text;
  std::uint64_t fingerprint = 0;
  LineIndex lines;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  Database db;
  FileIndex index;
  std::vector<DocBlock> docs;
  std::vector<Diagnostic> diagnostics;  // phases I and II
};

struct Exporter {
  std::string target;  // project-relative path, or library(Name)
  std::optional<std::size_t> file;  // index into ProjectModel::files
  bool module_export = true;  // false: top-level definition of a plain file

  friend bool operator==(const Exporter&, const Exporter&) = default;
};

struct GlobalIndex {
  std::map<std::string, std::size_t> files;  // rel path -> index
  std::map<PredicateIndicator, std::vector<Exporter>> exports;
};

/// What a file can call besides its own definitions and the built-ins.
struct ImportedPredicate {
  PredicateIndicator indicator;
  std::string from;  // import spec text
  std::optional<std::size_t> file;
};

/// An undefined or not-exported call kept for quick-fix generation.
struct LinkProblem {
  Diagnostic diagnostic;
  std::size_t file = 0;
  PredicateIndicator predicate;
  std::optional<std::size_t> exporter_file;  // not_exported: the target
};

class ProjectModel {
 public:
  std::filesystem::path root;
  WorkspaceConfig config;
  std::vector<SourceFile> files;  // sorted by rel
  GlobalIndex global;
  std::vector<std::vector<ImportedPredicate>> imported;  // per file
  std::vector<LinkProblem> problems;
  std::vector<Diagnostic> diagnostics;  // all phases, sorted

  /// Looks up a file by relative path or by absolute/relative file system path.
  [[nodiscard]] const SourceFile* find_file(const std::filesystem::path& path) const;
  [[nodiscard]] std::optional<std::size_t> file_index(const std::filesystem::path& path) const;
  [[nodiscard]] const SourceFile* file(FileId id) const;
  /// Project file an import names, if it is part of the project.
  [[nodiscard]] std::optional<std::size_t> import_target(const ImportRecord& rec) const;
  /// Relative path of the file a span belongs to; empty if unknown.
  [[nodiscard]] std::string path_of(FileId id) const;

  [[nodiscard]] std::size_t error_count() const;
};

/// Discovers files below `root` matching the config globs and builds the
/// model. Throws std::runtime_error when `root` is not a directory.
ProjectModel build_project(const std::filesystem::path& root, const WorkspaceConfig& config = {});

/// Builds a model from in-memory sources keyed by relative path. `root` is
/// used to resolve imports and may not exist.
ProjectModel build_sources(const std::map<std::string, std::string>& sources,
                           const std::filesystem::path& root, const WorkspaceConfig& config = {});

/// Phase III over already indexed files. Fills global, imported, problems
/// and returns the link diagnostics.
std::vector<Diagnostic> link(ProjectModel& model);

/// True when `rel` matches the glob (`**`, `*`, `?`).
bool glob_match(std::string_view glob, std::string_view rel);

/// 64-bit FNV-1a.
std::uint64_t fingerprint(std::string_view text);

// -- Queries ---------------------------------------------------------------

enum class OutlineKind { Module, ImportDirective, ExportedPredicate, PrivatePredicate, DcgNonterminal };

std::string_view to_string(OutlineKind kind);

struct OutlineItem {
  OutlineKind kind = OutlineKind::PrivatePredicate;
  std::string label;
  SourceSpan target_span;
  std::vector<OutlineItem> children;
};

/// nullopt when `file` is not part of the model.
std::optional<std::vector<OutlineItem>> outline(const ProjectModel& model,
                                                const std::filesystem::path& file);

enum class HoverMode { Definition, Doc };

struct HoverInfo {
  std::string text;
  SourceSpan span;
};

std::optional<HoverInfo> hover(const ProjectModel& model, const std::filesystem::path& file,
                               std::size_t offset, HoverMode mode);

enum class CompletionKind { Predicate, Module, Dcg, Variable, Keyword };

std::string_view to_string(CompletionKind kind);

struct CompletionItem {
  std::string label;
  CompletionKind kind = CompletionKind::Predicate;
  std::string synopsis;
  std::string insert_text;
};

std::vector<CompletionItem> complete(const ProjectModel& model, const std::filesystem::path& file,
                                     std::size_t offset);

struct TextEdit {
  std::string file;  // relative path
  SourceSpan span;
  std::string replacement;
  std::uint64_t fingerprint = 0;  // of the file text the span refers to
};

struct QuickFix {
  std::string title;
  std::vector<TextEdit> edits;
  std::string fixes_code;
  SourceSpan fixes_span;
};

std::vector<QuickFix> quick_fixes(const Diagnostic& diagnostic, const ProjectModel& model);

class StaleFixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies the edits to `sources` (relative path -> text). Edits of one file
/// are applied from the end backwards. Throws StaleFixError, leaving
/// `sources` untouched, when any file changed since the fix was made.
void apply_fix(const QuickFix& fix, std::map<std::string, std::string>& sources);

}  // namespace plf
