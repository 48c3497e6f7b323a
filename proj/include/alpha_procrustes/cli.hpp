#pragma once

// `alpha_proc` command-line front end.
//
// Exit codes:
//   0  success
//   2  parse or usage error (bad flag, unreadable/malformed CSV, empty alpha list, --trials 0)
//   3  domain error (singular matrix for alpha <= 0, dimension mismatch, non-SPD intermediate, ...)
//   4  complex spectrum in the RKHS block eigenproblem
//   5  validation failure

#include <iosfwd>

#include "alpha_procrustes/error.hpp"

namespace alpha_procrustes::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kComplexSpectrum = 4, kValidationFailed = 5 };

int exit_code_for(ErrorCode code);

/// Runs one command. Results go to `out` (or --output), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alpha_procrustes::cli
