#ifndef CHESHIRE_CLI_HPP
#define CHESHIRE_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Command-line front end. All output formatting is delegated to io, so a
// fixed argv (plus seed) produces byte-identical bytes on stdout or in the
// --out file on every run.

namespace cheshire::cli {

// Runs one invocation. `args` excludes the program name. Returns the exit
// code: 0 on success, 1 on runtime failure (missing sigma_z record,
// refused inferred output, unwritable file), 2 on argument/config errors.
// Help requests return 0.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// "0.05,0.1,0.2" -> those values; "0.05:0.6:8" -> 8 evenly spaced points
// including both endpoints. Throws PreconditionError on malformed text.
std::vector<double> parse_g_list(const std::string& text);

// "exact" -> nullopt, decimal integer >= 1 -> its value.
std::optional<std::uint64_t> parse_shots(const std::string& text);

} // namespace cheshire::cli

#endif
