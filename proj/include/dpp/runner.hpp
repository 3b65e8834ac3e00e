#pragma once

/// Subcommand dispatch: solve | regularity | jumps | figure | sweep.
/// Exit codes: 0 success, 1 solver non-convergence, 2 invalid config or
/// runtime failure, 3 invariant violation above slack.

#include <ostream>
#include <string>

#include "dpp/config.hpp"

namespace dpp {

int run_command(const std::string& command, const ExperimentConfig& cfg,
                const std::string& out_dir, std::ostream& err);

} // namespace dpp
