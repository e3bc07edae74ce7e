#ifndef REPMETA_CLI_HPP
#define REPMETA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace repmeta::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,         ///< I/O or unexpected error
    kInputError = 2,      ///< bad flags or input data
    kPrecondition = 3,    ///< analysis undefined for this input
    kEnumerationCap = 4,  ///< too many subsets for the requested u
};

/// Environment variable naming the directory that relative output paths
/// (and the default simulate --out) are resolved against.
inline constexpr const char* kOutDirEnv = "REPMETA_OUT_DIR";

/// Entry point behind the `repmeta` binary. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace repmeta::cli

#endif // REPMETA_CLI_HPP
