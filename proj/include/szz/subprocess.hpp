// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace szz {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0; }
};

struct CommandSpec {
    std::vector<std::string> argv;                            // argv[0] resolved via PATH
    std::vector<std::pair<std::string, std::string>> env;     // overrides on top of environ
    std::string stdin_data;
};

// Runs the command to completion, feeding stdin_data and capturing both output
// streams. Throws IoFailure when the process cannot be spawned; a non-zero
// exit status is reported through CommandResult, not an exception.
CommandResult run_command(const CommandSpec& spec);

}  // namespace szz
