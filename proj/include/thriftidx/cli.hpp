#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thriftidx::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 2,
    kDataError = 3,
    kInternalError = 4,
};

/// Runs one subcommand (ingest, analyze, report, identities, generate,
/// serve). Failures print a single line `error: <Class> <Code>: <message>` to
/// `err` and return the matching exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace thriftidx::cli
