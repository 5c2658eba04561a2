#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hvlab/config.hpp"

namespace hvl {

/// Known scenario identifiers in CLI order.
const std::vector<std::string>& scenario_ids();

/// Runs one named scenario, writing its CSV tables and summary.json under
/// out_dir (nothing is written outside it).  Returns the process exit code:
/// 0 all asserted invariants pass, 1 assertion failure, 2 configuration
/// error, 3 numeric failure.  Nonzero exits leave one machine-parsable line
/// on err.
int run_scenario(const std::string& id, const RunConfig& cfg, const std::string& out_dir,
                 std::ostream& err);

}  // namespace hvl
