#ifndef CDVRP_CLI_HPP
#define CDVRP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cdvrp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `cdvrp` tool. `args` excludes the program name.
// Returns 0 on success, 1 when the input is infeasible or a check fails,
// 2 on usage, parse or resource errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdvrp

#endif  // CDVRP_CLI_HPP
