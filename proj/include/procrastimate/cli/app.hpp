#pragma once

#include <iosfwd>

namespace procrastimate::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // invalid pack, rejected input
inline constexpr int kExitUsage = 2;     // bad arguments, unreadable files
inline constexpr int kExitDeadlock = 3;  // bot found no winning move
inline constexpr int kExitCapped = 4;    // bot hit --max-actions

// Entry point of the `procrastimate` binary, with injectable streams.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace procrastimate::cli
