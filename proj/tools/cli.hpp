#pragma once

#include <ostream>

namespace qcov::cli {

/// Runs the qcov command line. Returns 0 on success, 1 on an internal error
/// and 2 on a usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcov::cli
