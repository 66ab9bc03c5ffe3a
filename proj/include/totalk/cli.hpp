#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace totalk {

// Exit codes: 0 all checks pass, 1 a verification failed, 2 input error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace totalk
