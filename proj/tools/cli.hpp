#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lvke::cli {

// Exit statuses: 0 success, 1 usage error, 2 runtime failure (I/O, empty
// document, missing collection, ...).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

// Name of the environment variable holding the default filter-list directory.
inline constexpr const char* kFilterDirEnv = "LVKE_FILTER_DIR";

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lvke::cli
