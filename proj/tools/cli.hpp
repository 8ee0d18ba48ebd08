#pragma once

#include <string>
#include <vector>

namespace meneuron::cli {

/// Runs one command line (without the program name) and returns the exit
/// code: 0 ok, 1 other failure, 2 config error, 3 numerical failure,
/// 4 calibration degeneracy, 5 domain violation.
int run(const std::vector<std::string>& args);

}  // namespace meneuron::cli
