#ifndef CCSC_CLI_HPP
#define CCSC_CLI_HPP

#include "ccsc/constellation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ccsc {

/// Exit statuses of run_cli.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_domain = 2 };

/// Dispatches mi | secrecy | sweep | maximize | max-sweep | surface |
/// constellation. args excludes the program name. Data goes to --out (or
/// out), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// bpsk, psk<M>, qam<M> or file:<path> (JSON array of [re, im] pairs).
Constellation parse_constellation_selector(const std::string& selector);

/// "v" or "start:stop:step" in dB; the stop value is included when it lands
/// within 1e-9 of a step multiple. Throws Errc::parse on malformed input.
std::vector<double> parse_db_grid(const std::string& text);

/// Comma list of numbers, or start:stop:step.
std::vector<double> parse_number_list(const std::string& text);

} // namespace ccsc

#endif
