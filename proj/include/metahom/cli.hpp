#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metahom {

// Exit codes: 0 success, 1 usage/parse/domain error, 2 when every
// homogeneity test failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

// Entry point of the metahom command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace metahom
