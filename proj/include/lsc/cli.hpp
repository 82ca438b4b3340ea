#pragma once

#include <ostream>
#include <string>

namespace lsc {

// Exit statuses of the lsc tool.
enum Exit : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitFuel = 2,
  kExitRejected = 3,
  kExitProperty = 4,
};

// Runs one lsc command line. argv[0] is the program name.
// fixtures_dir is where `gen --suite` looks for the derivation fixtures unless
// --fixtures is given.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err, const std::string &fixtures_dir = "");

} // namespace lsc
