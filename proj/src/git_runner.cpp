// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/git_runner.hpp"

#include <cstdlib>

#include "szz/errors.hpp"

namespace szz {

std::string GitRunner::resolve_binary() {
    const char* env = std::getenv("GIT_BINARY");
    return (env && *env) ? env : "git";
}

GitRunner::GitRunner(std::filesystem::path repo)
    : repo_(std::move(repo)), binary_(resolve_binary()) {}

CommandResult GitRunner::run(std::vector<std::string> args, std::string stdin_data) const {
    CommandSpec spec;
    spec.argv = {binary_,
                 "-C",
                 repo_.string(),
                 "-c",
                 "core.abbrev=40",
                 "-c",
                 "core.quotepath=false"};
    for (auto& a : args) spec.argv.push_back(std::move(a));
    spec.env = {
        {"GIT_CONFIG_GLOBAL", "/dev/null"},
        {"GIT_CONFIG_SYSTEM", "/dev/null"},
        {"GIT_CONFIG_NOSYSTEM", "1"},
        {"GIT_TERMINAL_PROMPT", "0"},
        {"GIT_OPTIONAL_LOCKS", "0"},
        {"GIT_PAGER", "cat"},
        {"LC_ALL", "C"},
        {"TZ", "UTC"},
    };
    spec.stdin_data = std::move(stdin_data);
    return run_command(spec);
}

std::string GitRunner::check(std::vector<std::string> args, std::string stdin_data) const {
    const std::string joined = args.empty() ? "" : args[0];
    CommandResult res = run(std::move(args), std::move(stdin_data));
    if (!res.ok()) {
        throw GitCommandFailed("git " + joined + " failed (exit " +
                               std::to_string(res.exit_code) + "): " + res.err);
    }
    return std::move(res.out);
}

}  // namespace szz
