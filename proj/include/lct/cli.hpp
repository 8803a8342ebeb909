#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lct::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kInsufficientData = 2,
    kInternalError = 3,
};

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (and to --out when given); diagnostics go to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Expands `--config <file>`: each `key=value` line becomes `--key value`
/// unless the flag is already on the command line. `key=true` becomes a bare
/// `--key`, `key=false` is dropped. Blank lines and lines starting with '#'
/// are ignored.
std::vector<std::string> expand_config(std::vector<std::string> args);

}  // namespace lct::cli
