#ifndef CAPRIMES_CLI_HPP
#define CAPRIMES_CLI_HPP

#include <atomic>
#include <iosfwd>

namespace caprimes {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitComplete = 0,
    kExitUsage = 1,
    kExitIncomplete = 2,
    kExitDegenerate = 3,
    kExitInternal = 4,
};

inline constexpr const char* kCacheDirEnv = "CAPRIMES_CACHE_DIR";

/// Set asynchronously (e.g. from SIGINT) to stop a degree run between tuples.
std::atomic<bool>& interrupt_flag();

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace caprimes

#endif  // CAPRIMES_CLI_HPP
