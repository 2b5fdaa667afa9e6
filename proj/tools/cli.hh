#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lllmt::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_unsatisfied = 1; ///< criterion fails, or the algorithm did not terminate
inline constexpr int exit_input = 2;

/// `args` excludes the program name.
auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;

}
