// SPDX-License-Identifier: Apache-2.0
//
// Source positions and diagnostics shared by every stage of the front-end.
//
// Offsets are byte offsets into UTF-8 source text. Lines and columns are
// 1-based; columns count code points, not bytes. A span's end position is
// exclusive: it names the position just past the last covered character.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plf {

/// Opaque handle naming one source file within a session or project.
struct FileId {
  std::uint32_t value = 0;

  friend auto operator<=>(const FileId&, const FileId&) = default;
};

struct SourceSpan {
  FileId file;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  [[nodiscard]] std::size_t length() const { return end_offset - start_offset; }

  /// True when `offset` lies inside the half-open range [start, end).
  [[nodiscard]] bool contains(std::size_t offset) const {
    return offset >= start_offset && offset < end_offset;
  }

  [[nodiscard]] bool encloses(const SourceSpan& other) const {
    return start_offset <= other.start_offset && other.end_offset <= end_offset;
  }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Smallest span covering both arguments. Both must belong to the same file.
SourceSpan join(const SourceSpan& first, const SourceSpan& last);

struct Position {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
};

/// Maps byte offsets to line/column positions (and back) for one text.
class LineIndex {
 public:
  LineIndex() = default;
  explicit LineIndex(std::string_view text);

  [[nodiscard]] Position position(std::size_t offset) const;

  /// Byte offset of a 1-based line/column, or npos when out of range.
  /// Column `len + 1` of a line (just past its last character) is accepted.
  [[nodiscard]] std::size_t offset(std::uint32_t line, std::uint32_t col) const;

  [[nodiscard]] SourceSpan span(FileId file, std::size_t start, std::size_t end) const;

  [[nodiscard]] std::size_t line_count() const { return line_starts_.size(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string text_;
  std::vector<std::size_t> line_starts_{0};
};

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);

struct RelatedNote {
  SourceSpan span;
  std::string note;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::vector<RelatedNote> related;
};

/// Stable diagnostic codes. Anything emitted by the library is one of these.
namespace codes {
inline constexpr std::string_view kSyntaxError = "syntax_error";
inline constexpr std::string_view kOperatorClash = "operator_clash";
inline constexpr std::string_view kMissingEnd = "missing_end";
inline constexpr std::string_view kUnbalancedDelimiter = "unbalanced_delimiter";
inline constexpr std::string_view kUndefinedPredicate = "undefined_predicate";
inline constexpr std::string_view kNotExported = "not_exported";
inline constexpr std::string_view kUnresolvedImport = "unresolved_import";
inline constexpr std::string_view kDiscontiguousClauses = "discontiguous_clauses";
inline constexpr std::string_view kUnknownDirective = "unknown_directive";
inline constexpr std::string_view kSingletonVariable = "singleton_variable";
inline constexpr std::string_view kFileNotFound = "file_not_found";
inline constexpr std::string_view kDirectiveError = "directive_error";
inline constexpr std::string_view kInvalidClause = "invalid_clause";
inline constexpr std::string_view kInternalError = "internal_error";
inline constexpr std::string_view kDuplicateDoc = "duplicate_doc";
inline constexpr std::string_view kDocNotAtFirstClause = "doc_not_at_first_clause";
inline constexpr std::string_view kUnreadableFile = "unreadable_file";
}  // namespace codes

Diagnostic make_diagnostic(Severity severity, std::string_view code, std::string message,
                           const SourceSpan& span);

}  // namespace plf
