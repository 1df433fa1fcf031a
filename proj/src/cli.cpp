// SPDX-License-Identifier: Apache-2.0

#include "plfront/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "plfront/docgen.hpp"
#include "plfront/engine.hpp"
#include "plfront/workspace.hpp"

namespace plf {

namespace fs = std::filesystem;

namespace {

// A failure of the tool itself (exit code 2).
class ToolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format;
  std::vector<std::string> libs;
  std::vector<std::string> globs;
  std::string root;
  std::string path;
  std::string position;
  bool doc = false;
  std::string select;
  std::string code;
  int index = -1;
  bool apply = false;
  std::string out_dir;
};

struct Settings {
  WorkspaceConfig workspace;
  bool machine = false;
  std::optional<fs::path> doc_out;
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Reads `plfront.conf` from the root, then lets command-line flags override
// each setting they mention.
Settings load_settings(const Options& o, const fs::path& root) {
  Settings s;
  std::vector<std::string> globs;
  std::vector<fs::path> libs;
  std::string format = "human";
  std::ifstream conf(root / "plfront.conf");
  std::string line;
  int line_no = 0;
  while (conf && std::getline(conf, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ToolError("plfront.conf:" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "glob") {
      globs.push_back(value);
    } else if (key == "lib") {
      fs::path p(value);
      libs.push_back(p.is_absolute() ? p : root / p);
    } else if (key == "format") {
      format = value;
    } else if (key == "completion_limit") {
      try {
        s.workspace.completion_limit = std::stoul(value);
      } catch (const std::exception&) {
        throw ToolError("plfront.conf:" + std::to_string(line_no) + ": bad completion_limit");
      }
    } else if (key == "doc_out") {
      fs::path p(value);
      s.doc_out = p.is_absolute() ? p : root / p;
    } else {
      throw ToolError("plfront.conf:" + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  if (!o.globs.empty()) globs = o.globs;
  if (!o.libs.empty()) {
    libs.clear();
    for (const std::string& l : o.libs) libs.emplace_back(l);
  }
  if (!o.format.empty()) format = o.format;
  if (format != "human" && format != "machine") throw ToolError("unknown format " + format);
  if (!globs.empty()) s.workspace.globs = globs;
  std::error_code ec;
  for (fs::path& l : libs) l = fs::absolute(l, ec);
  s.workspace.library_paths = libs;
  if (s.workspace.completion_limit == 0) throw ToolError("completion_limit must be at least 1");
  s.machine = format == "machine";
  return s;
}

std::string field(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

void print_span_fields(std::ostream& out, const std::string& file, const SourceSpan& s) {
  out << field(file) << '\t' << s.start_line << '\t' << s.start_col << '\t' << s.end_line << '\t'
      << s.end_col;
}

void print_diagnostic(std::ostream& out, const ProjectModel& m, const Diagnostic& d, bool machine) {
  const std::string file = m.path_of(d.span.file);
  if (machine) {
    print_span_fields(out, file, d.span);
    out << '\t' << to_string(d.severity) << '\t' << d.code << '\t' << field(d.message) << '\n';
    return;
  }
  out << file << ':' << d.span.start_line << ':' << d.span.start_col << ": "
      << to_string(d.severity) << ": " << d.message << " [" << d.code << "]\n";
  for (const RelatedNote& n : d.related) {
    out << "  " << m.path_of(n.span.file) << ':' << n.span.start_line << ':' << n.span.start_col
        << ": note: " << n.note << '\n';
  }
}

fs::path project_root(const Options& o, const std::string& positional) {
  fs::path root = !positional.empty() ? fs::path(positional)
                  : !o.root.empty()   ? fs::path(o.root)
                                      : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw ToolError("not a directory: " + root.string());
  return root;
}

// Root for single-file queries: --root, else the file's directory.
fs::path root_for_file(const Options& o, const fs::path& file) {
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) throw ToolError("no such file: " + file.string());
  if (!o.root.empty()) return project_root(o, "");
  fs::path dir = fs::absolute(file, ec).parent_path();
  return dir;
}

struct FileQuery {
  ProjectModel model;
  std::size_t file = 0;
  Settings settings;
};

FileQuery open_file(const Options& o) {
  fs::path file(o.path);
  fs::path root = root_for_file(o, file);
  FileQuery q;
  q.settings = load_settings(o, root);
  q.model = build_project(root, q.settings.workspace);
  std::error_code ec;
  auto idx = q.model.file_index(fs::absolute(file, ec));
  if (!idx) throw ToolError(o.path + " is not part of the project at " + root.string());
  q.file = *idx;
  return q;
}

std::size_t offset_at(const SourceFile& f, const std::string& position) {
  std::size_t colon = position.find(':');
  unsigned long line = 0;
  unsigned long col = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(position);
    std::size_t used = 0;
    line = std::stoul(position.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(position);
    std::string rest = position.substr(colon + 1);
    col = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(position);
  } catch (const std::exception&) {
    throw ToolError("position must be LINE:COL, got " + position);
  }
  if (line == 0 || col == 0) throw ToolError("position out of range: " + position);
  std::size_t off = f.lines.offset(static_cast<std::uint32_t>(line), static_cast<std::uint32_t>(col));
  if (off == LineIndex::npos) throw ToolError("position out of range: " + position);
  return off;
}

int cmd_check(const Options& o, std::ostream& out) {
  fs::path root = project_root(o, o.path);
  Settings s = load_settings(o, root);
  ProjectModel model = build_project(root, s.workspace);
  print_diagnostics(out, model, s.machine);
  return model.error_count() > 0 ? 1 : 0;
}

int cmd_outline(const Options& o, std::ostream& out) {
  FileQuery q = open_file(o);
  const SourceFile& f = q.model.files[q.file];
  auto items = outline(q.model, f.path);
  for (const OutlineItem& item : *items) {
    if (q.settings.machine) {
      print_span_fields(out, f.rel, item.target_span);
      out << '\t' << to_string(item.kind) << '\t' << field(item.label) << '\n';
    } else {
      out << item.target_span.start_line << ':' << item.target_span.start_col << '\t'
          << to_string(item.kind) << '\t' << item.label << '\n';
    }
  }
  return 0;
}

int cmd_hover(const Options& o, std::ostream& out) {
  FileQuery q = open_file(o);
  const SourceFile& f = q.model.files[q.file];
  std::size_t offset = offset_at(f, o.position);
  auto info = hover(q.model, f.path, offset, o.doc ? HoverMode::Doc : HoverMode::Definition);
  if (!info) return 0;
  if (q.settings.machine) {
    print_span_fields(out, q.model.path_of(info->span.file), info->span);
    out << '\t' << field(info->text) << '\n';
  } else {
    out << info->text << '\n';
  }
  return 0;
}

int cmd_complete(const Options& o, std::ostream& out) {
  FileQuery q = open_file(o);
  const SourceFile& f = q.model.files[q.file];
  std::size_t offset = offset_at(f, o.position);
  for (const CompletionItem& item : complete(q.model, f.path, offset)) {
    if (q.settings.machine) {
      out << field(item.label) << '\t' << to_string(item.kind) << '\t' << field(item.synopsis)
          << '\t' << field(item.insert_text) << '\n';
    } else {
      out << item.label << '\t' << to_string(item.kind) << '\t' << item.synopsis << '\n';
    }
  }
  return 0;
}

void print_fixes(std::ostream& out, const std::vector<QuickFix>& fixes, bool machine) {
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    const QuickFix& fix = fixes[i];
    if (machine) {
      for (const TextEdit& e : fix.edits) {
        out << i << '\t' << field(fix.title) << '\t';
        print_span_fields(out, e.file, e.span);
        out << '\t' << field(e.replacement) << '\n';
      }
      continue;
    }
    out << '[' << i << "] " << fix.title << '\n';
    for (const TextEdit& e : fix.edits) {
      out << "    " << e.file << ':' << e.span.start_line << ':' << e.span.start_col << ": "
          << (e.span.length() == 0 ? "insert " : "replace with ") << '"' << field(e.replacement)
          << "\"\n";
    }
  }
}

int cmd_fix(const Options& o, std::ostream& out, std::ostream& err) {
  fs::path root = project_root(o, o.path);
  Settings s = load_settings(o, root);
  ProjectModel model = build_project(root, s.workspace);

  // Selector: FILE[:LINE[:COL]], FILE relative to the root or absolute.
  std::string sel_file = o.select;
  std::optional<unsigned long> sel_line;
  std::optional<unsigned long> sel_col;
  auto take_number = [&](std::optional<unsigned long>& slot) {
    std::size_t colon = sel_file.rfind(':');
    if (colon == std::string::npos) return false;
    std::string tail = sel_file.substr(colon + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return false;
    slot = std::stoul(tail);
    sel_file.erase(colon);
    return true;
  };
  std::optional<unsigned long> last;
  std::optional<unsigned long> before_last;
  if (take_number(last) && take_number(before_last)) {
    sel_line = before_last;
    sel_col = last;
  } else {
    sel_line = last;
  }
  std::optional<std::size_t> fi = model.file_index(sel_file);
  if (!fi) {
    std::error_code ec;
    fi = model.file_index(fs::absolute(sel_file, ec));
  }
  if (!fi) throw ToolError("selector file is not part of the project: " + sel_file);

  std::vector<const Diagnostic*> matches;
  for (const Diagnostic& d : model.diagnostics) {
    if (d.span.file != model.files[*fi].id) continue;
    if (sel_line && d.span.start_line != *sel_line) continue;
    if (sel_col && d.span.start_col != *sel_col) continue;
    if (!o.code.empty() && d.code != o.code) continue;
    if (quick_fixes(d, model).empty()) continue;
    matches.push_back(&d);
  }
  if (matches.empty()) {
    err << "no fixable diagnostic matches " << o.select << '\n';
    return 2;
  }
  if (matches.size() > 1) {
    err << "selector " << o.select << " matches " << matches.size() << " diagnostics:\n";
    for (const Diagnostic* d : matches) print_diagnostic(out, model, *d, s.machine);
    return 2;
  }
  const Diagnostic& target = *matches.front();
  std::vector<QuickFix> fixes = quick_fixes(target, model);
  if (!o.apply) {
    print_fixes(out, fixes, s.machine);
    return 0;
  }
  if (o.index < 0 && fixes.size() > 1) {
    err << fixes.size() << " fixes are available; choose one with --index\n";
    print_fixes(out, fixes, s.machine);
    return 2;
  }
  std::size_t chosen = o.index < 0 ? 0 : static_cast<std::size_t>(o.index);
  if (chosen >= fixes.size()) throw ToolError("fix index out of range");
  const QuickFix& fix = fixes[chosen];

  std::map<std::string, std::string> sources;
  for (const TextEdit& e : fix.edits) {
    const SourceFile* f = model.find_file(e.file);
    if (f == nullptr) throw ToolError("unknown file in fix: " + e.file);
    std::ifstream in(f->path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    sources[e.file] = ss.str();
  }
  try {
    apply_fix(fix, sources);
  } catch (const StaleFixError& e) {
    throw ToolError(e.what());
  }
  for (const auto& [rel, text] : sources) {
    std::ofstream outf(model.find_file(rel)->path, std::ios::binary | std::ios::trunc);
    outf << text;
    if (!outf) throw ToolError("cannot write " + rel);
  }

  auto count = [](const ProjectModel& m, Severity sev) {
    return std::count_if(m.diagnostics.begin(), m.diagnostics.end(),
                         [&](const Diagnostic& d) { return d.severity == sev; });
  };
  ProjectModel after = build_project(root, s.workspace);
  if (s.machine) {
    out << "applied\t" << field(fix.title) << '\n';
    out << "errors\t" << count(model, Severity::Error) << '\t' << count(after, Severity::Error)
        << '\n';
    out << "warnings\t" << count(model, Severity::Warning) << '\t'
        << count(after, Severity::Warning) << '\n';
  } else {
    out << "Applied: " << fix.title << '\n';
    out << "Errors: " << count(model, Severity::Error) << " -> " << count(after, Severity::Error)
        << '\n';
    out << "Warnings: " << count(model, Severity::Warning) << " -> "
        << count(after, Severity::Warning) << '\n';
  }
  return after.error_count() > 0 ? 1 : 0;
}

int cmd_doc(const Options& o, std::ostream& out) {
  fs::path root = project_root(o, o.path);
  Settings s = load_settings(o, root);
  fs::path dir = !o.out_dir.empty() ? fs::path(o.out_dir) : s.doc_out.value_or(root / "doc");
  ProjectModel model = build_project(root, s.workspace);
  std::vector<std::string> written;
  try {
    written = generate_html(model, dir);
  } catch (const fs::filesystem_error& e) {
    throw ToolError(std::string("cannot write documentation: ") + e.what());
  }
  for (const std::string& name : written) out << (dir / name).generic_string() << '\n';
  return 0;
}

int cmd_repl(const Options& o, std::istream& in, std::ostream& out) {
  std::vector<fs::path> libs(o.libs.begin(), o.libs.end());
  Loader loader(libs);
  Database db;
  ReplOptions options;
  options.loader = &loader;
  return repl(db, in, out, options);
}

}  // namespace

void print_diagnostics(std::ostream& out, const ProjectModel& model, bool machine) {
  for (const Diagnostic& d : model.diagnostics) print_diagnostic(out, model, d, machine);
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Prolog front-end and project analyzer", "plfront"};
  app.require_subcommand(1, 1);
  app.add_option("--format", o.format, "Output format: human or machine");
  app.add_option("--lib", o.libs, "Library search path (repeatable)")->allow_extra_args(false);
  app.add_option("--glob", o.globs, "Source file pattern (repeatable)")->allow_extra_args(false);
  app.add_option("--root", o.root, "Project root directory");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  CLI::App* check = sub("check", "Report diagnostics for a project");
  check->add_option("root", o.path, "Project root (default: current directory)");

  CLI::App* outline_cmd = sub("outline", "Show the outline of a file");
  outline_cmd->add_option("file", o.path)->required();

  CLI::App* hover_cmd = sub("hover", "Show hover information at LINE:COL");
  hover_cmd->add_option("file", o.path)->required();
  hover_cmd->add_option("position", o.position, "1-based LINE:COL")->required();
  hover_cmd->add_flag("--doc", o.doc, "Show documentation instead of the definition");

  CLI::App* complete_cmd = sub("complete", "List completions at LINE:COL");
  complete_cmd->add_option("file", o.path)->required();
  complete_cmd->add_option("position", o.position, "1-based LINE:COL")->required();

  CLI::App* fix_cmd = sub("fix", "List or apply quick fixes for one diagnostic");
  fix_cmd->add_option("root", o.path, "Project root (default: current directory)");
  fix_cmd->add_option("--select", o.select, "FILE[:LINE[:COL]] of the diagnostic")->required();
  fix_cmd->add_option("--code", o.code, "Diagnostic code to match");
  fix_cmd->add_option("--index", o.index, "Fix to apply when several exist");
  fix_cmd->add_flag("--apply", o.apply, "Write the fix to disk and re-check");

  CLI::App* doc_cmd = sub("doc", "Generate HTML documentation");
  doc_cmd->add_option("root", o.path, "Project root (default: current directory)");
  doc_cmd->add_option("--out", o.out_dir, "Output directory (default: ROOT/doc)");

  CLI::App* repl_cmd = sub("repl", "Interactive read-eval loop");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (outline_cmd->parsed()) return cmd_outline(o, out);
    if (hover_cmd->parsed()) return cmd_hover(o, out);
    if (complete_cmd->parsed()) return cmd_complete(o, out);
    if (fix_cmd->parsed()) return cmd_fix(o, out, err);
    if (doc_cmd->parsed()) return cmd_doc(o, out);
    if (repl_cmd->parsed()) return cmd_repl(o, in, out);
  } catch (const ToolError& e) {
    err << "plfront: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "plfront: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace plf
