#pragma once

#include <filesystem>
#include <optional>

#include "modprime/primes.hpp"
#include "modprime/table.hpp"
#include "run_config.hpp"

namespace modprime::cli {

// Sieve limit the command needs when --limit is 0.
std::uint64_t required_limit(const RunConfig& cfg);

// Loads primes_<limit>.bin from MODPRIME_CACHE_DIR when present, otherwise
// sieves and, if the directory is set, stores the table there.
PrimeTable load_prime_table(std::uint64_t limit);

// Runs one subcommand. Library errors propagate.
ConvergenceTable run_command(const RunConfig& cfg);

}  // namespace modprime::cli
