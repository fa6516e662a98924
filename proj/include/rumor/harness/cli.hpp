#pragma once

#include <ostream>

namespace rumor::harness {

/// Entry point of the `rumor` tool. Returns 0 on success, 1 on a runtime
/// failure and 2 on a usage error (unknown subcommand or flag, bad config).
int cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rumor::harness
