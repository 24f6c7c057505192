#ifndef TRAJEX_CLI_HPP
#define TRAJEX_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace trajex {

/// Runs the command-line tool. Exit status: 0 success (NECESSARY/SURVEYED
/// for explore), 1 error, 2 counterexample found.
int runCli(std::vector<std::string> args, std::ostream &out, std::ostream &err);

} // namespace trajex

#endif
