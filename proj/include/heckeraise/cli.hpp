#pragma once

#include <string>

#include "heckeraise/eigensys.hpp"

namespace heckeraise {

// Eigen-system files: {"bound": "...", "level": "...", "pairs": [["q", "a_q"], ...]}
// with decimal-string integers and one pair per prime q <= bound.  load
// validates primality (parse_error) and coverage (coverage_gap).
EigenSystem load_system(const std::string& text);
std::string save_system(const EigenSystem& e);

// The hecke-raise command line: returns the process exit code.
// 0 = success, 1 = mathematical failure (no witness, failed verification,
// empty search, ...), 2 = usage or input error.
int run_cli(int argc, char** argv);

} // namespace heckeraise
