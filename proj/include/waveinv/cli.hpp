#pragma once

#include <string>
#include <vector>

namespace waveinv {

/// Command-line entry point; returns the process exit code
/// (0 success, 1 diagnostic failure, 2 nonconverged, 3 validation error).
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

} // namespace waveinv
