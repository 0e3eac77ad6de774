#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace remotetrack::cli {

/// Entry point of the remote_track tool. args[0] is the program name.
/// Returns the process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace remotetrack::cli
