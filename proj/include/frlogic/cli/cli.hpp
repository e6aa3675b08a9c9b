#pragma once

#include <ostream>

namespace frlogic::cli {

/// Exit codes: the verdict matched its expectation, it did not, or the
/// invocation or an input file was malformed.
inline constexpr int kExitExpected = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitUsage = 2;

/// Runs exactly one subcommand (eval, check-frame, find-model, quantum-verify,
/// fr-run, fr-ablate). Reports go to `out`, usage text and diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frlogic::cli
