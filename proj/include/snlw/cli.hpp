#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace snlw::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kBlowUp = 3,
  kBudgetExceeded = 4,
};

/// Default output root when --out is absent.
inline constexpr const char* kOutputRootVariable = "SNLW_OUTPUT_ROOT";

/// Runs one subcommand. args excludes the program name, e.g.
/// {"sigma", "--alpha", "0.25", "--N", "8"}. Errors are reported on err as a
/// one-line JSON record and mirrored to error.json in the output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snlw::cli
