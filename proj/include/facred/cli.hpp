#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace facred {

// Runs one command line (without the program name). Reports go to out as JSON, diagnostics to err.
// Exit status: 0 success, 1 verification mismatch, 2 usage or input error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace facred
