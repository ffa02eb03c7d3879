#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dqe {

// Runs one CLI invocation. `args` is argv without the program name.
// Exit status: 0 success, 1 quality failure (a goal not achieved, rows
// rejected at admission, lint errors), 2 usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dqe
