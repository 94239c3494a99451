#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laserlab::cli {

/**
 * Runs `laserlab <report|sweep|dynamics|gillespie|correlate|band>
 * --config <file.json> [--out <path>] [--seed <u64>] [--self-check]`.
 *
 * `args` excludes the program name. Data goes to --out (stdout when
 * omitted); diagnostics to `err`. Exit codes: 0 success, 2 configuration
 * error, 3 numerical divergence, 4 self-check failure.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace laserlab::cli
