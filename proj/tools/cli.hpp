#pragma once

#include <iosfwd>

namespace fpnet::cli {

// Entry point behind the fpnet binary; also linked by the test suite.
// Exit codes: 0 success, 1 synth criterion failure, 2 usage/config error,
// 3 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fpnet::cli
