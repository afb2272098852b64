#ifndef SGPHS_TOOLS_CLI_H_
#define SGPHS_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace sgphs::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTimeout = 2;
inline constexpr int kExitNoSolution = 3;

// args excludes the program name.
auto run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) -> int;

}  // namespace sgphs::cli

#endif  // SGPHS_TOOLS_CLI_H_
