#pragma once

#include <string>
#include <vector>

#include "noarb/gordan.hpp"

namespace noarb::cli {

/// exit_code: 0 ok, 1 invalid input, 2 arbitrage / constraint violation
/// detected, 3 numerical failure.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs one command line. argv[0] is the program name.
CommandResult run(const std::vector<std::string>& argv);

/// End-to-end cross-check of the one-period worked example and the
/// four pricing engines on (100, 110, 0.03, 0.2, 0.25).
CommandResult xcheck(bool json);

/// The one-period example market: bond, stock 100 -> {120, 80}, and the
/// K = 110 call and put priced at full precision by the binomial model.
gordan::Market one_period_market();

}  // namespace noarb::cli
