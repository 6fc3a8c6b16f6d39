#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flw {

const char* build_id();

// Targets accepted by `verify`.
const std::vector<std::string>& verify_targets();

// Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flw
