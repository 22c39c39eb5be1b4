#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwalk {

// Exit codes: 0 success, 2 usage or validation, 3 numerical non-convergence,
// 4 cost guard.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace qwalk
