// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace szz {

// Base timestamp for scripted fixtures; step i commits at base + i * 3600 so
// "most recent" tie-breaks are always well defined.
inline constexpr std::int64_t kFixtureEpochBase = 1577836800;  // 2020-01-01T00:00:00Z
inline constexpr const char* kFixtureIdentity = "Fixture Forge <fixture@example.invalid>";

struct FixtureEdit {
    std::string file;
    std::optional<std::string> content;  // whole new file content; nullopt deletes
};

struct FixtureStep {
    std::string label;
    std::vector<std::string> parents;  // labels of earlier steps; empty for roots
    std::vector<FixtureEdit> edits;
    std::string message;  // defaults to the label
    std::optional<std::int64_t> author_time;
};

// Declarative description of a synthetic repository. Identities and clocks
// are fixed constants, so two builds of the same script produce identical
// commit ids.
struct FixtureScript {
    std::vector<FixtureStep> steps;

    // Line-oriented text format:
    //   step <label> [<parent-label>...]
    //   time <epoch-seconds>
    //   file <path>
    //   | <content line>
    //   endfile
    //   rm <path>
    //   msg
    //   | <message line>
    //   endmsg
    //   endstep
    // '#' starts a comment; a bare '|' is an empty line.
    static FixtureScript parse(const std::string& text);
    std::string serialize() const;

    void validate() const;  // throws ScriptInvalid
    std::int64_t time_of_step(std::size_t index) const;
    const FixtureStep& step(const std::string& label) const;
};

struct FixtureMap {
    std::filesystem::path repo_path;
    std::map<std::string, std::string> label_to_id;

    const std::string& id(const std::string& label) const;
    std::string label_of(const std::string& id) const;  // empty when unknown
};

// Realizes the script as a git repository at `dir` (created; must not contain
// an existing repo). refs/heads/master ends at the last step.
FixtureMap build_fixture(const FixtureScript& script, const std::filesystem::path& dir);

// Seeded random repository scripts for property tests and benchmarks.
// Linear history; every generated line carries a globally unique token, and
// modifications keep the token while bumping a small version counter, so
// diff alignment is unambiguous and similarity between versions stays high.
struct RandomScriptOptions {
    int min_commits = 5;
    int max_commits = 25;
    int max_files = 6;
    int max_ops_per_commit = 4;
};

FixtureScript random_fixture_script(std::uint64_t seed, const RandomScriptOptions& opts = {});

// ---------------------------------------------------------------------------
// Brute-force line-provenance oracle.
//
// Replays the script in memory, never touching git: for every commit it
// records, per surviving line, the ordered list of commits (newest first)
// that created or last modified that line. Matching is exact-content first
// (longest common subsequence of equal lines), then positional within each
// replaced block.
// ---------------------------------------------------------------------------

struct LineProvenance {
    std::string content;
    std::vector<std::string> history;  // commit ids, newest first
};

using OracleFileState = std::vector<LineProvenance>;

struct OracleState {
    std::map<std::string, OracleFileState> files;
};

class ProvenanceOracle {
  public:
    static ProvenanceOracle build(const FixtureScript& script, const FixtureMap& map);

    const OracleState& state_after(const std::string& commit_id) const;

    // Provenance of line `line` of `file` as seen at the first parent of
    // `commit_id` — the coordinates used by removed lines of that commit.
    const LineProvenance& removed_line_provenance(const std::string& commit_id,
                                                  const std::string& file, int line) const;

  private:
    std::map<std::string, OracleState> after_;       // commit id -> state
    std::map<std::string, std::string> first_parent_;  // commit id -> parent id ("" for roots)
};

}  // namespace szz
