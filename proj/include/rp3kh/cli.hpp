#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rp3kh::cli {

// Full command-line surface; returns the process exit code.
// 0 = success, 1 = check failure, 2 = input/usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rp3kh::cli
