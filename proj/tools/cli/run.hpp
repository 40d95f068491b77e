#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/io.hpp"

namespace gausschan::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 2,   // invalid channel, "no", deviation above tolerance, failed selftest
  kUndecided = 3,
  kUsage = 64,
  kDataErr = 65,
  kInternal = 70,
};

/// args excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Copy of a report with the timestamp and the digest over the rest removed;
/// two runs with identical inputs give identical strip_volatile output.
json strip_volatile(json report);

}  // namespace gausschan::cli
