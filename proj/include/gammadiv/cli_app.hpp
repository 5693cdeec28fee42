#pragma once

// Command-line front end. run() is the whole program minus main(), so
// tests can drive every subcommand in-process and capture its output.
//
// Exit codes: 0 success, 1 usage error (unknown flags, malformed or
// out-of-domain values), 2 runtime error (overflow guards, resume-file
// mismatch or corruption, I/O failure).

#include <iosfwd>
#include <string>
#include <vector>

namespace gammadiv {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gammadiv
