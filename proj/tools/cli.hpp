#pragma once

#include <iosfwd>

namespace thermoadh::cli {

/// Entry point of the thermoadh tool; returns the process exit code.
///   0 success, 1 configuration or usage error (or a failed verify suite),
///   2 StepTooSmall or a failed sweep run, 3 NoConvergence, 4 other errors.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermoadh::cli
