#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace urt::cli {

/// Exit codes of the `urt` front end.
enum ExitCode : int { ok = 0, check_failed = 1, bad_arguments = 2, format_error = 3 };

/// Runs one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::string& path);

} // namespace urt::cli
