#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cft3m/selftest.hpp"

namespace cft3m {

inline constexpr std::uint64_t kDefaultSeed = 1729;

enum class Command { splitting, local, verify, selftest, report };
enum class OutputFormat { automatic, text, json };

struct RunConfig {
    Command command = Command::selftest;
    std::string input_path;
    std::string knot;     // splitting
    std::string subgroup; // local, "a,b;c,d"
    std::vector<std::string> theorems; // verify filter; empty = all
    std::uint64_t seed = kDefaultSeed;
    std::size_t cases = 100;
    OutputFormat format = OutputFormat::automatic;
};

/// Default seed, honoring the CFT3M_SEED environment override.
std::uint64_t default_seed();

/// Dispatches one command. Exit status: 0 all checks passed, 1 a verified
/// statement was violated, 2 input/schema/usage error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point (argument parsing + run).
int cli_main(int argc, char** argv);

} // namespace cft3m
