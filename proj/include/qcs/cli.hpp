#pragma once

namespace qcs {

// Full command-line driver; returns the process exit code
// (0 success, 1 domain error with a diagnostic, 2 usage error).
int run_cli(int argc, const char* const* argv);

} // namespace qcs
