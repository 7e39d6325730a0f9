// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "szz/git_facade.hpp"
#include "szz/szz_suite.hpp"

namespace szz {

// Normalized edit-distance similarity on whitespace-collapsed strings:
// 1 - lev(a', b') / max(|a'|, |b'|); both empty -> 1.0.
double line_similarity(std::string_view a, std::string_view b);

enum class ChainRole { Previous, Descendant, Initial };

std::string chain_role_name(ChainRole role);

struct ChainHop {
    std::string commit_id;
    ChainRole role = ChainRole::Previous;
    std::string matched_line;  // the line's content as introduced by this commit
};

// Ordered blame lineage of one removed line: the previous commit first, then
// descendants, ending at the commit where tracing stops (the initial commit).
// A single-hop chain carries role Initial; by position it is also the
// previous commit.
struct TraceChain {
    std::string fix_id;
    LineChange line;
    std::vector<ChainHop> hops;

    std::vector<std::string> commit_ids() const;
};

struct TcOptions {
    int max_depth = -1;  // -1 traces to the initial commit
    double similarity_threshold = 0.75;
};

// Iterated blame for one removed line of `fix`. When the blamed commit
// itself removed lines in the same file, the trace continues on the removed
// line with the highest similarity to the tracked content, ties broken by
// smaller line-number distance, then by smaller line number. Tracing stops
// at root commits, when no candidate reaches the threshold, or when a
// (commit, path, line) state repeats.
// Throws LineNotRemovedByFix when `line` is not a removed line of `fix`.
TraceChain trace_line(const RepoHandle& repo, const CommitRef& fix, const LineChange& line,
                      const TcOptions& options = {});

enum class TcMode { ChronologicalTrace, UniqueCommits, CustomBlame };

struct TcModeSpec {
    TcMode mode = TcMode::UniqueCommits;
    int blame_count = 1;  // CustomBlame: hops kept per chain; -1 = full trace
};

struct TcResult {
    std::string fix_id;
    std::vector<TraceChain> chains;  // diff order of removed lines

    Prediction to_prediction(const TcModeSpec& mode) const;
    // Commit ids in trace order (per line, previous to initial); duplicates
    // preserved, as Chronological Trace mode reports them.
    std::vector<std::string> chronological_ids() const;
};

TcResult tcszz(const RepoHandle& repo, const CommitRef& fix, const TcOptions& options = {});

Prediction tcszz_predict(const RepoHandle& repo, const CommitRef& fix, const TcModeSpec& mode,
                         const TcOptions& options = {});

}  // namespace szz
