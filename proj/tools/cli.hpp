#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace idt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// args excludes the program name.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace idt::cli
