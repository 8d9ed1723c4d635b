#pragma once

#include <iosfwd>

namespace perconoise {

// Runs every exact / exhaustive cross-module check, printing one line per
// check. Returns the number of failures. Output is deterministic (no wall
// times, no addresses).
int run_oracle_suite(std::ostream& out, int threads);

}  // namespace perconoise
