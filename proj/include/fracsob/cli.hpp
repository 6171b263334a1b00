#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracsob::cli {

/// Entry point shared by the binary and the tests. Exit status: 0 success,
/// 1 numerical-tolerance failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracsob::cli
