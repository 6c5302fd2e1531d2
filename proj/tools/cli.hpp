#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace semiorbit::cli {

enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

// args excludes the program name. Results go to out; diagnostics and progress to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace semiorbit::cli
