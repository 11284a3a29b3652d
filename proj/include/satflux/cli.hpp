#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace satflux {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitConfig = 2 };

/// Entry point for `satflux <simulate|tw|check|sweep> ...`. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace satflux
