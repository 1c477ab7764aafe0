#pragma once

#include <ostream>

#include "cctv/service/config.hpp"

namespace cctv::service {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNoPath = 3;

/// Entry point of the `cctvmap` tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const EnvLookup& env = [](const char* k) { return static_cast<const char*>(std::getenv(k)); });

}  // namespace cctv::service
