#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bimet {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitBudget = 3 };

struct Config {
    std::size_t max_expansions = 3'000'000;
    int cert_depth = 3;
    std::int64_t denom_cap = 64;
    int workers = 1;
    int verbosity = 0;
};

// "key = value" lines; '#' starts a comment. Throws FormatError.
Config load_config(const std::string& path);

// args excludes the program name. The config path comes from --config or BIMET_CONFIG.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bimet
