// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end:
//
//   plfront check [ROOT]                  diagnostics for a project
//   plfront outline FILE                  outline of one file
//   plfront hover FILE LINE:COL [--doc]   definition or documentation hover
//   plfront complete FILE LINE:COL        completion proposals
//   plfront fix [ROOT] --select FILE:LINE[:COL] [--code C] [--index N] [--apply]
//   plfront doc [ROOT] [--out DIR]        HTML documentation
//   plfront repl                          read-eval loop on stdin/stdout
//
// Global flags: --format=human|machine, --lib=PATH, --glob=PATTERN (both
// repeatable), --root=DIR. Settings may also come from a `plfront.conf`
// file of key=value lines in the project root; flags win.
//
// Exit codes: 0 success / no errors, 1 error diagnostics present, 2 tool
// failure (bad arguments, missing files, ambiguous selectors).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plf {

class ProjectModel;

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// Writes the model's diagnostics the way `check` does. Machine records are
/// tab separated: file, start_line, start_col, end_line, end_col, severity,
/// code, message.
void print_diagnostics(std::ostream& out, const ProjectModel& model, bool machine);

}  // namespace plf
