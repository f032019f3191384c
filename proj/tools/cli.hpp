#ifndef HYPTILE_CLI_HPP
#define HYPTILE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hyptile::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kDomain = 3,
  kCap = 4,
  kBudget = 5,
  kInconclusive = 6,
  kIo = 7,
  kModel = 8,
};

/// Runs one command line (without the program name). Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyptile::cli

#endif  // HYPTILE_CLI_HPP
