#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace closedecon {

// Exit codes: 0 success, 1 analysis-negative (verify false, no convergence, infeasible), 2 usage or IO error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace closedecon
