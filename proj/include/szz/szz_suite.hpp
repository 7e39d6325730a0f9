// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "szz/git_facade.hpp"

namespace szz {

enum class Algo { B, AG, L, R, MA, PYD, TC };

std::string algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

// One algorithm's verdict for one bug-fixing commit. `inducing` is sorted
// and duplicate-free; it is empty exactly when no mappable removed line
// survived the variant's filters.
struct Prediction {
    std::string fix_id;
    Algo algorithm = Algo::B;
    std::vector<std::string> inducing;
    // Blame attribution per surviving removed line, in diff order.
    std::vector<std::pair<LineChange, std::string>> per_line;

    bool contains(const std::string& id) const;
};

// All removed-side line changes of the fix, in diff order. Modified lines
// appear through their removed side; pure additions contribute nothing.
std::vector<LineChange> removed_lines(const RepoHandle& repo, const CommitRef& fix);

Prediction bszz(const RepoHandle& repo, const CommitRef& fix);
Prediction szz_pyd(const RepoHandle& repo, const CommitRef& fix);
Prediction agszz(const RepoHandle& repo, const CommitRef& fix);
Prediction maszz(const RepoHandle& repo, const CommitRef& fix);
Prediction lszz(const RepoHandle& repo, const CommitRef& fix);
Prediction rszz(const RepoHandle& repo, const CommitRef& fix);

// Dispatch by algorithm tag; Algo::TC uses the tracer defaults (full trace,
// unique commits).
Prediction run_algo(const RepoHandle& repo, const CommitRef& fix, Algo algo);

}  // namespace szz
