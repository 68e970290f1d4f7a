#pragma once

#include <string>
#include <vector>

namespace hmap::cli {

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 certified failure (a certificate or precondition failed), 2 usage or
// config error.
int run(const std::vector<std::string>& args);

}  // namespace hmap::cli
