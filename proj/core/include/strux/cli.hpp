#pragma once

#include <iosfwd>

namespace strux {

// Entry point of the command-line tool; argv[0] is the program name. Reports
// go to `out`, errors to `err`. Exit codes: 0 success / properties hold,
// 1 property violation or inequivalence (with a witness), 2 usage, file, or
// parse errors.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace strux
