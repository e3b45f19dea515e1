#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ceo::cli {

// returns the process exit code: 0 ok, 1 domain answer false, 2 usage, 3 numerical failure
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ceo::cli
