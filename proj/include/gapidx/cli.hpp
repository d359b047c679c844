#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gapidx {

/// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace gapidx
