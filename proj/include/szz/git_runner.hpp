// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "szz/subprocess.hpp"

namespace szz {

// Invokes the git executable against one repository with a pinned
// configuration so outputs are identical across machines and user setups:
// user/system config is disabled, abbreviation is forced to 40 hex digits,
// path quoting is off, and the locale/timezone are fixed. The executable is
// taken from $GIT_BINARY when set, "git" otherwise.
class GitRunner {
  public:
    explicit GitRunner(std::filesystem::path repo);

    // Runs `git -C <repo> <args...>`; non-zero exit is reported in the result.
    CommandResult run(std::vector<std::string> args, std::string stdin_data = {}) const;

    // Like run(), but throws GitCommandFailed on non-zero exit.
    std::string check(std::vector<std::string> args, std::string stdin_data = {}) const;

    const std::filesystem::path& repo() const { return repo_; }
    const std::string& binary() const { return binary_; }

    static std::string resolve_binary();

  private:
    std::filesystem::path repo_;
    std::string binary_;
};

}  // namespace szz
