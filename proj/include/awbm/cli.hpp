#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace awbm::cli {

// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, malformed_input = 2, precondition_failed = 3, internal_error = 4 };

// Runs one invocation; args excludes the program name. Emits a single JSON document on out.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace awbm::cli
