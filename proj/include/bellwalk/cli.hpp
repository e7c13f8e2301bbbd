#pragma once

namespace bellwalk::cli {

// Parses argv and runs one subcommand. Returns the process exit status:
// 0 success, 2 usage/configuration error, 3 invariant violation detected
// mid-run (e.g. norm drift), 1 failed check report.
int run(int argc, const char* const* argv);

}  // namespace bellwalk::cli
