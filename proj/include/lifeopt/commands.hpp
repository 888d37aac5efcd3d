#pragma once

#include <iosfwd>
#include <string>

#include "lifeopt/config.hpp"

namespace lifeopt {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitSolver = 2,
    kExitValidation = 3,
};

/// closed_form.csv, hjb.csv and summary.txt.
int cmd_solve(const RunConfig& config, std::ostream& log);
/// figure1a.csv, figure1b.csv and a theta-monotonicity verdict.
int cmd_sweep_theta(const RunConfig& config, std::ostream& log);
/// indifference.csv with the x-independence self-check.
int cmd_indifference(const RunConfig& config, std::ostream& log);
/// validation.txt; kExitValidation if any check fails.
int cmd_validate(const RunConfig& config, std::ostream& log);

/// Runs `command` and maps exceptions to exit codes, reporting on err.
int run_command(const std::string& command, const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace lifeopt
