#ifndef QHOPF_CLI_HPP
#define QHOPF_CLI_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace qhopf::cli {

enum ExitCode : int { kAllPass = 0, kCheckFailed = 1, kUsageError = 2 };

/// Runs the command line (without the program name). Reports go to `out`,
/// usage text and parameter errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a", "bi", "a+bi", "a-bi" (also with j); throws std::invalid_argument.
std::complex<double> parse_complex(const std::string& text);

}  // namespace qhopf::cli

#endif  // QHOPF_CLI_HPP
