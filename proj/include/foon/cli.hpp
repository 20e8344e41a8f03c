#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foon::cli {

/// Runs one command line (args excludes the program name). Reports go to
/// `out` unless -o is given; diagnostics go to `err`.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foon::cli
