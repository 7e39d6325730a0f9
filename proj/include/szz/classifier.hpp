// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "szz/fixes_miner.hpp"
#include "szz/git_facade.hpp"
#include "szz/szz_suite.hpp"
#include "szz/tc_szz.hpp"

namespace szz {

enum class GhostKind { RemoveMappingGhost, AddMappingGhost };
enum class GhostSide { AsFix, AsInducer };

std::string ghost_kind_name(GhostKind k);

// A fixing commit that removes nothing cannot be mapped back; an inducing
// commit that adds nothing cannot be reached by blame. Commits that change
// nothing at all (merges, pure renames) are neither kind.
std::optional<GhostKind> classify_ghost(const RepoHandle& repo, const CommitRef& c,
                                        GhostSide side);

struct GhostFrequencies {
    long rmg_fixes = 0;
    long total_fixes = 0;
    long amg_commits = 0;          // over every commit in the repository
    long total_commits = 0;
    long amg_inducer_instances = 0;  // with multiplicity across links
    long total_inducer_instances = 0;
    long fixes_failing_from_amg = 0;  // all inducers AMG and the fix not RMG

    double rmg_rate_over_fixes() const;
    double amg_rate_over_all_commits() const;
    double amg_rate_over_inducers() const;
};

GhostFrequencies ghost_frequencies(const RepoHandle& repo, const std::vector<BugFixLink>& dataset,
                                   int workers = 1);

enum class OutcomeKind { Success, PartialSuccess, RemoveMG, AddMG, FailureWithoutMG };
enum class FailureMode { LineChange, FunctionBlame, FunctionLog, WithinFile, CrossFile };

std::string outcome_kind_name(OutcomeKind k);
std::string failure_mode_name(FailureMode m);
std::optional<FailureMode> failure_mode_from_name(const std::string& name);

struct OutcomeCategory {
    OutcomeKind category = OutcomeKind::Success;
    std::optional<FailureMode> detail;
};

// Success: every annotated inducer predicted. Partial: some but not all.
// Otherwise the failure is attributed to the fix being a Remove Mapping
// Ghost, to every inducer being an Add Mapping Ghost, or to neither.
OutcomeCategory categorize_outcome(const RepoHandle& repo, const BugFixLink& truth,
                                   const Prediction& predicted);

struct FunctionSpan {
    std::string file;
    std::string name;
    int start_line = 0;
    int end_line = 0;
    std::string at_id;
};

// Top-level function definitions of `file` at commit `c`, by brace-balanced
// scanning. Files the scanner cannot balance fall back to one whole-file
// span named after the file.
std::vector<FunctionSpan> extract_functions(const RepoHandle& repo, const CommitRef& c,
                                            const std::string& file);

// Escalation ladder for fixes that failed without a mapping ghost: line
// lineage, one blame over the enclosing functions, range-log of those
// functions, whole-file history, and finally cross-file. The first rung any
// true inducer satisfies wins.
FailureMode classify_failure(const RepoHandle& repo, const BugFixLink& truth,
                             const TcOptions& options = {});

struct FailureProbe {
    bool line_change = false;
    bool function_blame = false;
    bool function_log = false;
    bool within_file = false;
};

// Raw membership of each rung, without first-match short-circuiting.
FailureProbe probe_failure_rungs(const RepoHandle& repo, const BugFixLink& truth,
                                 const TcOptions& options = {});

struct PromptContext {
    std::string file;
    std::vector<std::string> function_names;
    std::string function_code;
};

// Strips `Fixes:` lines and every 7-40 digit hex run that occurs inside one
// of the true inducing ids.
std::string scrub_commit_message(const std::string& message,
                                 const std::vector<std::string>& inducing_ids);

// Byte-exact prompt instantiation: CrossFile -> A (message only), WithinFile
// -> B (message, file, function names), FunctionLog/FunctionBlame -> C
// (message, function code). Throws MissingContext when a required field is
// absent.
std::string emit_llm_prompt(FailureMode mode, const std::string& fix_message,
                            const PromptContext& context);

}  // namespace szz
