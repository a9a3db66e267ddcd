#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gfe::cli {

/// Runs the command line front end. Files go to --out; a short summary goes
/// to `out`, structured JSON errors to `err`. Returns the process exit code
/// (0 ok, 2 validation, 3 estimation, 4 I/O).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

/// Identifier baked in at configure time (git describe when available).
const char* build_id();

}  // namespace gfe::cli
