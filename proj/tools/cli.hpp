#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padic::cli {

/// Exit codes of the padicfp driver.
enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kDomain = 2,
  kPrecision = 3,
  kMaxIter = 4,
  kVerifyFailed = 5,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padic::cli
