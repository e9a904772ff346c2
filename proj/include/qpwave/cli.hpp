#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qpwave/lattice.hpp"

namespace qpwave {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitBudget = 3,
  kExitScanBand = 4,
};

/// Runs one subcommand; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

/// Parses "sqrt2", a comma list such as "1,sqrt2" or "1,0.5", or lattice JSON.
LatticeSpec parse_omega(const std::string& text);

}  // namespace qpwave
