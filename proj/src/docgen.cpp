// SPDX-License-Identifier: Apache-2.0

#include "plfront/docgen.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "plfront/printer.hpp"
#include "plfront/workspace.hpp"

namespace plf {

namespace detail {
extern const std::string_view kStyleSheet;
}  // namespace detail

namespace fs = std::filesystem;

std::optional<std::string> DocBlock::entry(std::string_view tag) const {
  for (const auto& [t, body] : entries) {
    if (t == tag) return body;
  }
  return std::nullopt;
}

namespace {

bool is_default_tag(std::string_view tag) {
  return std::find(std::begin(kDefaultDocTags), std::end(kDefaultDocTags), tag) !=
         std::end(kDefaultDocTags);
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    pos = nl + 1;
  }
  return out;
}

std::size_t indent_of(std::string_view line) {
  std::size_t n = line.find_first_not_of(" \t");
  return n == std::string_view::npos ? line.size() : n;
}

bool blank(std::string_view line) { return indent_of(line) == line.size(); }

// Comment text with the markers removed, one entry per source line.
std::vector<std::string> comment_lines(const Token& t) {
  std::vector<std::string> out;
  if (t.kind == TokenKind::LineComment) {
    std::string_view s = t.text;
    while (!s.empty() && s.front() == '%') s.remove_prefix(1);
    if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    std::string line(s);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    out.push_back(std::move(line));
    return out;
  }
  std::string_view s = t.text;
  if (s.substr(0, 2) == "/*") s.remove_prefix(2);
  while (!s.empty() && s.front() == '*') s.remove_prefix(1);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "*/") s.remove_suffix(2);
  std::vector<std::string> raw = split_lines(s);
  for (std::string& line : raw) {
    std::size_t ind = indent_of(line);
    if (ind < line.size() && line[ind] == '*') {
      line.erase(0, ind + 1);
      if (!line.empty() && line.front() == ' ') line.erase(0, 1);
    }
  }
  // Dedent by the smallest indentation among non-blank lines; the text right
  // after the opening marker does not count.
  std::size_t common = std::string::npos;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!blank(raw[i])) common = std::min(common, indent_of(raw[i]));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i == 0) {
      std::size_t ind = indent_of(raw[i]);
      raw[i].erase(0, ind);
    } else if (common != std::string::npos) {
      raw[i].erase(0, std::min(common, raw[i].size()));
    }
  }
  return raw;
}

// `Word:` at the very start of the line.
std::optional<std::pair<std::string, std::string>> tag_line(std::string_view line) {
  if (line.empty() || !(line.front() >= 'A' && line.front() <= 'Z')) return std::nullopt;
  std::size_t i = 1;
  while (i < line.size() && ((line[i] >= 'a' && line[i] <= 'z') || (line[i] >= 'A' && line[i] <= 'Z'))) {
    ++i;
  }
  if (i >= line.size() || line[i] != ':') return std::nullopt;
  if (i + 1 < line.size() && line[i + 1] != ' ' && line[i + 1] != '\t') return std::nullopt;
  std::string_view body = line.substr(i + 1);
  std::size_t b = body.find_first_not_of(" \t");
  body = b == std::string_view::npos ? std::string_view() : body.substr(b);
  return std::make_pair(std::string(line.substr(0, i + 1)), std::string(body));
}

std::string trim_block(std::string s) {
  std::size_t e = s.find_last_not_of(" \t\n");
  s.erase(e == std::string::npos ? 0 : e + 1);
  std::size_t b = s.find_first_not_of(" \t\n");
  return b == std::string::npos ? std::string() : s.substr(b);
}

// Splits leading comments into comment fields: runs of line comments on
// consecutive lines, or single block comments.
std::vector<std::vector<Token>> comment_groups(const std::vector<Token>& comments) {
  std::vector<std::vector<Token>> groups;
  for (const Token& t : comments) {
    bool joins = t.kind == TokenKind::LineComment && !groups.empty() &&
                 groups.back().back().kind == TokenKind::LineComment &&
                 t.span.start_line == groups.back().back().span.start_line + 1;
    if (joins) {
      groups.back().push_back(t);
    } else {
      groups.push_back({t});
    }
  }
  return groups;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_doc_entries(
    const std::vector<Token>& comments) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const Token& t : comments) {
    for (const std::string& line : comment_lines(t)) {
      if (auto tag = tag_line(line)) {
        entries.push_back(std::move(*tag));
      } else if (!entries.empty()) {
        std::string& body = entries.back().second;
        body += '\n';
        body += line.substr(indent_of(line));
      }
    }
  }
  for (auto& [tag, body] : entries) body = trim_block(body);
  return entries;
}

DocExtraction extract_docs(const std::vector<Sentence>& sentences) {
  DocExtraction out;
  std::set<PredicateIndicator> defined;
  auto has_block = [&](const DocTarget& target) {
    return std::any_of(out.blocks.begin(), out.blocks.end(),
                       [&](const DocBlock& b) { return b.target == target; });
  };
  for (const Sentence& s : sentences) {
    std::optional<DocTarget> target;
    bool first_clause = true;
    if (s.kind == SentenceKind::Directive) {
      Term goal = s.goal();
      if (goal.is("module", 2) && goal.arg(0).is_atom()) {
        target = DocTarget{true, goal.arg(0).name, {}};
      }
    } else if (!s.term.is("?-", 1) && s.head().is_callable()) {
      Term head = s.head();
      std::size_t extra = s.kind == SentenceKind::DcgRule ? 2 : 0;
      PredicateIndicator pi{std::string(head.functor()), head.arity() + extra};
      first_clause = defined.insert(pi).second;
      target = DocTarget{false, {}, pi};
    }
    if (!target) continue;
    // Only the comment field touching the sentence documents it.
    auto groups = comment_groups(s.leading_comments);
    if (!groups.empty()) {
      const Token& last = groups.back().back();
      std::size_t last_line =
          last.kind == TokenKind::LineComment ? last.span.start_line : last.span.end_line;
      if (last_line + 1 < s.span.start_line) groups.clear();
    }
    if (groups.size() > 1) groups.erase(groups.begin(), groups.end() - 1);
    for (const auto& group : groups) {
      auto entries = parse_doc_entries(group);
      bool tagged = std::any_of(entries.begin(), entries.end(),
                                [](const auto& e) { return is_default_tag(e.first); });
      if (!tagged) continue;
      SourceSpan span = join(group.front().span, group.back().span);
      std::string what = target->is_module ? "module " + target->module : target->predicate.str();
      if (!first_clause) {
        out.diagnostics.push_back(make_diagnostic(
            Severity::Warning, codes::kDocNotAtFirstClause,
            "documentation for " + what + " must precede its first clause; ignored", span));
        continue;
      }
      if (has_block(*target)) {
        out.diagnostics.push_back(make_diagnostic(Severity::Warning, codes::kDuplicateDoc,
                                                  "second documentation block for " + what,
                                                  span));
        continue;
      }
      out.blocks.push_back(DocBlock{std::move(entries), span, *target});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTML

namespace {

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string url_escape(std::string_view text) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::vector<std::string> page_names(const ProjectModel& model) {
  std::vector<std::string> names;
  std::set<std::string> used{"index"};
  for (const SourceFile& f : model.files) {
    std::string stem = fs::path(f.rel).stem().string();
    std::string name = stem;
    for (int n = 2; used.count(name) != 0; ++n) name = stem + "-" + std::to_string(n);
    used.insert(name);
    names.push_back(name + ".html");
  }
  return names;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw fs::filesystem_error("cannot write", path,
                               std::make_error_code(std::errc::permission_denied));
  }
  out << content;
  out.close();
  if (!out) {
    throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
  }
}

void head(std::ostringstream& html, const std::string& title) {
  html << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
       << escape(title) << "</title>\n<link rel=\"stylesheet\" href=\"style.css\">\n</head>\n<body>\n";
}

void doc_list(std::ostringstream& html, const DocBlock& block) {
  html << "<dl>\n";
  for (const auto& [tag, body] : block.entries) {
    html << "<dt>" << escape(tag) << "</dt><dd>" << escape(body) << "</dd>\n";
  }
  html << "</dl>\n";
}

std::vector<const DefinedPredicate*> by_position(const FileIndex& idx) {
  std::vector<const DefinedPredicate*> out;
  for (const auto& [pi, def] : idx.defined) out.push_back(&def);
  std::stable_sort(out.begin(), out.end(), [](const DefinedPredicate* a, const DefinedPredicate* b) {
    return a->clause_spans.front().start_offset < b->clause_spans.front().start_offset;
  });
  return out;
}

std::string render_page(const ProjectModel& model, std::size_t i,
                        const std::vector<std::string>& pages) {
  const SourceFile& f = model.files[i];
  const FileIndex& idx = f.index;
  std::ostringstream html;
  std::string title = idx.module ? "Module " + idx.module->name : "File " + f.rel;
  head(html, title);
  html << "<p class=\"nav\"><a href=\"index.html\">Project index</a></p>\n";
  html << "<h1>" << escape(title) << "</h1>\n";
  html << "<p>Source: <code>" << escape(f.rel) << "</code></p>\n";
  for (const DocBlock& b : f.docs) {
    if (b.target.is_module) doc_list(html, b);
  }

  html << "<h2>Imports</h2>\n";
  if (idx.imports.empty()) {
    html << "<p>None.</p>\n";
  } else {
    html << "<ul>\n";
    for (const ImportRecord& rec : idx.imports) {
      std::optional<std::size_t> target = model.import_target(rec);
      html << "<li>";
      if (target) {
        html << "<a href=\"" << pages[*target] << "\">" << escape(rec.target) << "</a>";
      } else {
        html << "<code>" << escape(rec.target) << "</code> <span class=\"note\">"
             << (rec.resolved || rec.library ? "outside this project" : "unresolved") << "</span>";
      }
      if (rec.names) {
        html << ":";
        for (const PredicateIndicator& pi : *rec.names) {
          const DefinedPredicate* d = target ? model.files[*target].index.find(pi) : nullptr;
          if (d != nullptr) {
            html << " <a href=\"" << pages[*target] << "#" << predicate_anchor(pi) << "\">"
                 << escape(d->label()) << "</a>";
          } else {
            html << " <code>" << escape(pi.str()) << "</code>";
          }
        }
      }
      html << "</li>\n";
    }
    html << "</ul>\n";
  }

  const auto preds = by_position(idx);
  html << "<h2>Predicates</h2>\n<table>\n<tr><th>Predicate</th><th>Synopsis</th></tr>\n";
  for (const DefinedPredicate* d : preds) {
    html << "<tr><td><a href=\"#" << predicate_anchor(d->indicator) << "\">" << escape(d->label())
         << "</a></td><td><code>" << escape(pretty_print_fresh(d->first_head, f.db.operators()))
         << "</code></td></tr>\n";
  }
  html << "</table>\n";

  html << "<h2>Details</h2>\n";
  for (const DefinedPredicate* d : preds) {
    std::string kind = "private";
    if (d->dcg) {
      kind = "grammar rule";
    } else if (idx.module && idx.module->exports.count(d->indicator) != 0) {
      kind = "exported";
    }
    html << "<section id=\"" << predicate_anchor(d->indicator) << "\">\n<h3>" << escape(d->label())
         << " <span class=\"kind\">" << kind << "</span></h3>\n<pre>"
         << escape(pretty_print_fresh(d->first_head, f.db.operators())) << "</pre>\n";
    if (d->doc) doc_list(html, f.docs[*d->doc]);
    html << "</section>\n";
  }
  html << "</body>\n</html>\n";
  return html.str();
}

std::string render_index(const ProjectModel& model, const std::vector<std::string>& pages) {
  std::ostringstream html;
  head(html, "Project documentation");
  html << "<h1>Project documentation</h1>\n";
  if (model.files.empty()) {
    html << "<p>No source files.</p>\n";
  } else {
    html << "<table>\n<tr><th>File</th><th>Module</th><th>Predicates</th></tr>\n";
    for (std::size_t i = 0; i < model.files.size(); ++i) {
      const SourceFile& f = model.files[i];
      html << "<tr><td><a href=\"" << pages[i] << "\">" << escape(f.rel) << "</a></td><td>"
           << (f.index.module ? escape(f.index.module->name) : std::string()) << "</td><td>"
           << f.index.defined.size() << "</td></tr>\n";
    }
    html << "</table>\n";
  }
  html << "</body>\n</html>\n";
  return html.str();
}

}  // namespace

std::string predicate_anchor(const PredicateIndicator& pi) {
  return "pred-" + url_escape(pi.name) + "-" + std::to_string(pi.arity);
}

std::string page_name(const ProjectModel& model, std::size_t file_index) {
  return page_names(model).at(file_index);
}

std::vector<std::string> generate_html(const ProjectModel& model, const fs::path& out) {
  fs::create_directories(out);
  const std::vector<std::string> pages = page_names(model);
  std::vector<std::string> written;
  write_file(out / "style.css", std::string(detail::kStyleSheet));
  written.emplace_back("style.css");
  write_file(out / "index.html", render_index(model, pages));
  written.emplace_back("index.html");
  for (std::size_t i = 0; i < model.files.size(); ++i) {
    write_file(out / pages[i], render_page(model, i, pages));
    written.push_back(pages[i]);
  }
  std::sort(written.begin(), written.end());
  return written;
}

}  // namespace plf
