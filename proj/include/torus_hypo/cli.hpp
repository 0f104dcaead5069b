#pragma once

#include <ostream>

#include "torus_hypo/error.hpp"

namespace torus_hypo::cli {

/// Exit codes; each outcome has exactly one.
enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kMalformed = 2,
  kNotHypoelliptic = 10,
  kUnknown = 20,
  kSolvability = 30,
  kProfile = 31,
  kZeroDivisor = 32,
  kCompatibility = 33,
  kGridMismatch = 34,
  kRefusedHypoelliptic = 40,
  kNoSolverApplies = 41,
};

int exit_code(ErrorKind kind);

/// Entry point of the `torus-hypo` tool; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace torus_hypo::cli
