#pragma once

#include <iosfwd>

namespace bimlog::cli {

/// Runs the command line tool in process. `out` receives the deterministic
/// payload (reports, logs, summaries), `err` the diagnostics.
///
/// Exit statuses:
///   0  success (for diff: the models are indistinguishable)
///   1  completed, but with skipped events, diagnostics or differences
///   2  input, format or usage error (strict mode aborts land here)
///   3  internal error
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bimlog::cli
