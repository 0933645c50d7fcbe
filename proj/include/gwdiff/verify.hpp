#pragma once

#include <iosfwd>

namespace gwdiff::verify {

// Runs the acceptance checks against the bundled reference instance and
// fixed-seed random instances, printing one [PASS]/[FAIL] line per
// criterion. Returns the number of failures. Deterministic.
int run_all(std::ostream& out);

}  // namespace gwdiff::verify
