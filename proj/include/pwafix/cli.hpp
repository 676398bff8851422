// Command-line front end: `solve` (.eqs), `analyze` (.tc) and `game` (.game).
//
// Exit codes: 0 success; 1 usage, parse or validation error; 2 no finite or
// no smallest fixed point; 3 minimality undecided; 4 internal error.
#ifndef PWAFIX_CLI_HPP
#define PWAFIX_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pwafix {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInput = 1;
inline constexpr int kNoFixedPoint = 2;
inline constexpr int kUndecidable = 3;
inline constexpr int kInternal = 4;
}  // namespace exit_code

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwafix

#endif  // PWAFIX_CLI_HPP
