#ifndef ROUTERKIT_SCANIO_CLI_HPP
#define ROUTERKIT_SCANIO_CLI_HPP

#include <iosfwd>

namespace routerkit::scanio
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConvergence = 3;

/// Runs one CLI invocation. Results go to `out` (or the --output file);
/// diagnostics go to `err` as "E:<code>: message" and "W: message" lines.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace routerkit::scanio

#endif
