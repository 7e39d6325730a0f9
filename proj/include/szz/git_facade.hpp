// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace szz {

// Identity and ordering metadata of one commit.
struct CommitRef {
    std::string id;           // 40 lowercase hex digits
    std::int64_t timestamp = 0;  // committer time, seconds since epoch
    int parent_count = 0;
    std::string subject;      // first line of the log message

    bool is_merge() const { return parent_count >= 2; }
    friend bool operator==(const CommitRef& a, const CommitRef& b) { return a.id == b.id; }
    friend bool operator<(const CommitRef& a, const CommitRef& b) { return a.id < b.id; }
};

enum class LineKind { Removed, Added };

// One removed or added line of a diff. Removed lines carry parent-side paths
// and line numbers, added lines child-side ones.
struct LineChange {
    std::string file;
    int number = 0;  // 1-based on its own side
    std::string content;
    LineKind kind = LineKind::Removed;

    friend bool operator==(const LineChange&, const LineChange&) = default;
};

struct DiffHunk {
    std::vector<LineChange> removed;
    std::vector<LineChange> added;
};

struct FileDiff {
    std::string old_path;  // empty for newly added files
    std::string new_path;  // empty for deleted files
    bool renamed = false;
    std::vector<DiffHunk> hunks;
};

struct DiffSet {
    CommitRef commit;
    std::vector<FileDiff> files;

    int removed_count() const;
    int added_count() const;
    std::vector<LineChange> removed_lines() const;  // diff order
};

struct BlameEntry {
    CommitRef origin;
    std::string origin_path;
    int origin_line = 0;  // 1-based at origin
    std::string content;
};

// Read-only view of a local git repository, pinned to one head commit.
// Copies share one immutable commit table and the query caches; every
// operation is safe to call from multiple workers concurrently and repeated
// calls return identical results.
class RepoHandle {
  public:
    // Throws NotARepo / EmptyRepo. `rev` selects the pinned head.
    static RepoHandle open(const std::filesystem::path& path, const std::string& rev = "HEAD");

    const std::filesystem::path& path() const;
    const CommitRef& head() const;

    // All ancestors of `until`, inclusive, over the full DAG. Order is
    // children-before-parents with ties broken by newer timestamp, then
    // smaller id.
    std::vector<CommitRef> list_commits(const CommitRef& until) const;

    std::size_t commit_count() const;
    bool has_commit(const std::string& id) const;
    CommitRef commit(const std::string& id) const;          // throws UnknownCommit
    CommitRef resolve_rev(const std::string& rev) const;    // rev-parse, throws UnknownCommit
    std::vector<std::string> parent_ids(const CommitRef& c) const;
    std::string message(const CommitRef& c) const;          // full log message

    // Applies fn(id, full message) to every ancestor of `until` (inclusive),
    // fetched in one bulk git invocation.
    void for_each_message(const CommitRef& until,
                          const std::function<void(const std::string&, const std::string&)>& fn)
        const;

    // Diff of `c` against its first parent (root: against the empty tree).
    // Rename detection at 50% similarity. Merge commits yield an empty set.
    std::shared_ptr<const DiffSet> commit_diff(const CommitRef& c) const;

    // Attribution of line `line` of `file` as they exist at the first parent
    // of `at`; follows renames. Throws NoSuchPathAtCommit / LineOutOfRange.
    BlameEntry blame_line(const CommitRef& at, const std::string& file, int line) const;

    // Full-file attribution at commit `rev` (not its parent); one entry per
    // line of `file` as of `rev`.
    std::shared_ptr<const std::vector<BlameEntry>> blame_file(const std::string& rev_id,
                                                              const std::string& file) const;

    // Commits that touched the evolving range, newest first; matches
    // `git log -L<start>,<end>:<file> <from>`.
    std::vector<CommitRef> log_line_range(const std::string& file, int start, int end,
                                          const CommitRef& from) const;

    // Commits touching the path (rename-following), newest first.
    std::vector<CommitRef> file_history(const std::string& file, const CommitRef& from) const;

    // All full ids containing `partial` as a substring anywhere, ascending.
    // Throws MalformedPartial for non-hex input or fewer than 7 digits.
    std::vector<CommitRef> resolve_partial_id(const std::string& partial) const;

    // Blob content of `file` at commit `c`. Throws NoSuchPathAtCommit.
    std::string file_at(const CommitRef& c, const std::string& file) const;

  private:
    struct State;
    std::shared_ptr<State> state_;
};

}  // namespace szz
