#pragma once

#include <iosfwd>

namespace pmult {

/// Exit codes: 0 pass, 1 check failure, 2 usage error, 3 internal invariant violation.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmult
