#pragma once

namespace recon {

// Entry point for the `recon` binary. Exit codes: 0 success, 1 input parse,
// 2 bias violation, 3 configuration, 4 internal invariant breach.
int run_cli(int argc, const char* const* argv);

} // namespace recon
