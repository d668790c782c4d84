#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chipvec {

// Command dispatcher behind the chipvec binary. Exit codes: 0 success,
// 1 domain error (messages on err), 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chipvec
