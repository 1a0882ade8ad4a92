// cli.hpp - command-line front end (field, solve, sweep, scan, vortices,
// sharing, replay).
//
// Exit status: 0 on success, 2 for invalid flags or parameters, 1 when the
// computation or file I/O fails. Every file written is accompanied by
// <file>.manifest.json holding the resolved arguments, which `replay` runs
// again.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dhw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Worker count used when --workers is absent: DHW_WORKERS if set and
/// positive, otherwise the hardware concurrency.
unsigned default_workers();

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace dhw::cli
