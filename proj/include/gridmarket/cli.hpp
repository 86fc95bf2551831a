#pragma once

namespace gridmarket {

// Full command-line surface (run / meter / powerflow / gen-profiles).
// Returns the process exit code: 0 only when every requested output was
// produced.
int run_cli(int argc, const char* const* argv);

}  // namespace gridmarket
