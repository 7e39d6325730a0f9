// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "szz/git_facade.hpp"

namespace szz {

// One "Fixes:" line of a commit message.
struct RawFixesRef {
    std::string fixing_id;  // filled by mine_dataset
    std::string raw_line;
    std::optional<std::string> partial;          // [0-9a-f]{7,40}, first match after the keyword
    std::optional<std::string> trailer_subject;  // quoted subject, when present
};

enum class AbnormalCategory { PartialCommitId, NotInRepository, Ambiguous };

std::string abnormal_category_name(AbnormalCategory c);

struct AbnormalRecord {
    std::string fixing_id;
    std::string raw_line;
    AbnormalCategory category = AbnormalCategory::PartialCommitId;
    std::string subcause;
};

// Ground-truth record: one fixing commit and the full ids of its annotated
// inducing commits (sorted, unique, never containing the fixing commit).
struct BugFixLink {
    CommitRef fixing;
    std::vector<std::string> inducing;
    std::vector<RawFixesRef> raw_refs;

    bool has_inducer(const std::string& id) const;
};

// One RawFixesRef per message line whose first non-blank token is exactly
// `Fixes:`. Hex runs shorter than 7 digits are rejected, so such lines yield
// a ref with an absent partial.
std::vector<RawFixesRef> extract_fixes_annotations(const std::string& message);

struct LinkOutcome {
    std::vector<CommitRef> resolved;               // non-empty on success
    std::optional<AbnormalRecord> abnormal;        // set when not resolved
};

// Resolves one annotation: absent partial -> PartialCommitId; zero matches ->
// NotInRepository; one match -> resolved; several matches -> resolved when
// the trailer subject singles one out, otherwise throws AmbiguousRef.
LinkOutcome link_bug_inducing(const RepoHandle& repo, const RawFixesRef& ref);

struct MineResult {
    std::vector<BugFixLink> dataset;        // ordered by (fixing timestamp, id)
    std::vector<AbnormalRecord> abnormal;   // same order
    std::vector<std::string> common_commits;  // both fixing and inducing; ascending
};

// Scans every commit reachable from `until`. A commit with at least one
// resolved annotation becomes a BugFixLink; a commit whose annotations all
// fail is recorded once in the abnormal list. Ambiguous annotations are
// flagged in the abnormal list rather than guessed.
MineResult mine_dataset(const RepoHandle& repo, const CommitRef& until, int workers = 1);

}  // namespace szz
