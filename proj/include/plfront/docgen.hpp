// SPDX-License-Identifier: Apache-2.0
//
// PrologDoc extraction and HTML summaries.
//
// A comment field is either a run of `%` line comments on consecutive lines
// or a single block comment. It becomes a DocBlock when it contains one of
// the default tags (Author:, Arguments:, Description:) and sits directly
// above the first clause of a predicate or above a module/2 directive:
//
//   %% Author: Jane
//   %% Description: Succeeds for small numbers.
//   %%   More text for the description.
//   small(X) :- X < 10.
//
// A tag is a capitalized word followed by a colon at the start of a comment
// line. Indented lines never start a tag, so argument lists such as
// `%   X: the input` stay inside the body of the tag above them.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plfront/database.hpp"
#include "plfront/reader.hpp"

namespace plf {

class ProjectModel;

inline constexpr std::string_view kDefaultDocTags[] = {"Author:", "Arguments:", "Description:"};

struct DocTarget {
  bool is_module = false;
  std::string module;        // set when is_module
  PredicateIndicator predicate;  // set otherwise (DCG: arity + 2)

  friend bool operator==(const DocTarget&, const DocTarget&) = default;
};

struct DocBlock {
  std::vector<std::pair<std::string, std::string>> entries;  // tag with colon, body
  SourceSpan raw_span;
  DocTarget target;

  /// Body of the first entry with `tag` ("Author:"), if any.
  [[nodiscard]] std::optional<std::string> entry(std::string_view tag) const;
};

struct DocExtraction {
  std::vector<DocBlock> blocks;
  std::vector<Diagnostic> diagnostics;
};

/// Attaches doc comments of one file to their targets. `sentences` must be
/// the file's sentences in source order, as produced by the reader.
DocExtraction extract_docs(const std::vector<Sentence>& sentences);

/// Parses the tag entries of one comment group. Empty when no line starts a tag.
std::vector<std::pair<std::string, std::string>> parse_doc_entries(
    const std::vector<Token>& comments);

/// Writes index.html, style.css and one page per source file into `out`.
/// Returns the written file names relative to `out`, sorted. Throws
/// std::filesystem::filesystem_error when `out` cannot be written.
std::vector<std::string> generate_html(const ProjectModel& model,
                                       const std::filesystem::path& out);

/// Page name used for a source file, e.g. `b.html`.
std::string page_name(const ProjectModel& model, std::size_t file_index);

/// Anchor of a predicate section: pred-<url-escaped name>-<arity>.
std::string predicate_anchor(const PredicateIndicator& pi);

}  // namespace plf
