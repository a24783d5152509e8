#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cogra::cli {

struct Options {
    std::string command;
    std::string scenario;
    std::string out;
    std::uint64_t seed = 1;
    std::optional<int> grid_order;
    std::size_t trials = 100000;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Runs one command; diagnostics go to `err`. Returns the process exit code.
int run(const Options& opt, std::ostream& err);

}  // namespace cogra::cli
