// SPDX-License-Identifier: Apache-2.0

#include "plfront/source.hpp"

#include <algorithm>

namespace plf {

namespace {

bool is_continuation_byte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0U) == 0x80U;
}

}  // namespace

SourceSpan join(const SourceSpan& first, const SourceSpan& last) {
  SourceSpan out = first;
  if (last.end_offset > out.end_offset) {
    out.end_offset = last.end_offset;
    out.end_line = last.end_line;
    out.end_col = last.end_col;
  }
  if (last.start_offset < out.start_offset) {
    out.start_offset = last.start_offset;
    out.start_line = last.start_line;
    out.start_col = last.start_col;
  }
  return out;
}

LineIndex::LineIndex(std::string_view text) : text_(text) {
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] == '\n') {
      line_starts_.push_back(i + 1);
    }
  }
}

Position LineIndex::position(std::size_t offset) const {
  offset = std::min(offset, text_.size());
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const auto line = static_cast<std::size_t>(it - line_starts_.begin());
  const std::size_t start = line_starts_[line - 1];
  std::uint32_t col = 1;
  for (std::size_t i = start; i < offset; ++i) {
    if (!is_continuation_byte(text_[i])) {
      ++col;
    }
  }
  return Position{static_cast<std::uint32_t>(line), col};
}

std::size_t LineIndex::offset(std::uint32_t line, std::uint32_t col) const {
  if (line == 0 || col == 0 || line > line_starts_.size()) {
    return npos;
  }
  const std::size_t start = line_starts_[line - 1];
  std::size_t end = line < line_starts_.size() ? line_starts_[line] - 1 : text_.size();
  std::uint32_t current = 1;
  for (std::size_t i = start; i <= end; ++i) {
    if (i < end && is_continuation_byte(text_[i])) {
      continue;
    }
    if (current == col) {
      return i;
    }
    ++current;
  }
  return npos;
}

SourceSpan LineIndex::span(FileId file, std::size_t start, std::size_t end) const {
  const Position from = position(start);
  const Position to = position(end);
  return SourceSpan{file, start, end, from.line, from.col, to.line, to.col};
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Info:
      return "info";
  }
  return "error";
}

Diagnostic make_diagnostic(Severity severity, std::string_view code, std::string message,
                           const SourceSpan& span) {
  return Diagnostic{severity, std::string(code), std::move(message), span, {}};
}

}  // namespace plf
