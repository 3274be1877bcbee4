#pragma once

namespace hierband {

/// Entry point of the `hierband` tool (fit / path / cv / simulate /
/// classify).  Exit codes: 0 success, 2 usage error, 1 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace hierband
