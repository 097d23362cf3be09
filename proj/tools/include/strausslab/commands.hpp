#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "strauss/modulus.hpp"

namespace strausslab {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitVerificationFailed = 2 };

/// Runs one command line (without the program name). Usage errors and I/O
/// failures return kExitError with a diagnostic on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "key=value" tokens into numbers. Throws std::invalid_argument naming
/// the token when it is malformed or repeats a key.
std::map<std::string, double> parse_params(const std::vector<std::string>& tokens);

/// Comma-separated reals, e.g. "2,3,5,8".
std::vector<double> parse_real_list(const std::string& text);

/// Builds a validated modulus from a CLI family name and overrides. Recognized
/// keys: gamma and n for every family, cl for logpower, k for iteratedlog and
/// triplelog, tau0 for the log-type families. Anything else is rejected with
/// the key named in the message.
strauss::ModulusSpec build_modulus(const std::string& family,
                                   const std::map<std::string, double>& params);

}  // namespace strausslab
