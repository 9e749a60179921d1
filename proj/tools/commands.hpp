#pragma once

#include "config.hpp"
#include "emit.hpp"

#include <string>
#include <vector>

namespace landau::app {

const std::vector<std::string>& command_names();

// Runs one subcommand (or "all") without writing files. Configuration
// problems throw ConfigError; numerical failures become failed reports.
CommandResult run_command(const std::string& command, const RunConfig& config);

// Full front end: argument parsing, config merge, run, emission, exit code.
int cli_main(int argc, char** argv);

}  // namespace landau::app
