// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "szz/errors.hpp"
#include "szz/fixture_forge.hpp"
#include "szz/git_facade.hpp"
#include "szz/git_runner.hpp"
#include "szz/util.hpp"
#include "test_support.hpp"

using namespace szz;
using szz::test::TempDir;

namespace {

FixtureMap build(const FixtureScript& script, const TempDir& tmp, const char* name = "repo") {
    return build_fixture(script, tmp.sub(name));
}

FixtureScript linear_abc() {
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "one\ntwo\nthree\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"f.c", "one\ntwo edited\nthree\n"}}, "b\n", {}},
        FixtureStep{"c", {"b"}, {FixtureEdit{"f.c", "one\ntwo edited\nthree\nfour\n"}}, "c\n", {}},
    };
    return s;
}

// Applies a DiffSet to an in-memory tree; the independent replay oracle for
// commit_diff consistency.
void apply_diff(std::map<std::string, std::vector<std::string>>& tree, const DiffSet& diff) {
    for (const auto& f : diff.files) {
        std::vector<std::string> old_lines;
        if (!f.old_path.empty()) {
            auto it = tree.find(f.old_path);
            if (it != tree.end()) {
                old_lines = it->second;
                tree.erase(it);
            }
        }
        if (f.new_path.empty()) continue;  // deleted file

        std::vector<std::string> out;
        std::size_t old_idx = 0;  // consumed old lines
        int offset = 0;           // added-so-far minus removed-so-far
        for (const auto& h : f.hunks) {
            // last untouched old line before this hunk
            const int old_anchor = h.removed.empty()
                                       ? h.added.front().number - 1 - offset
                                       : h.removed.front().number - 1;
            while (old_idx < static_cast<std::size_t>(old_anchor))
                out.push_back(old_lines[old_idx++]);
            old_idx += h.removed.size();
            for (const auto& a : h.added) out.push_back(a.content);
            offset += static_cast<int>(h.added.size()) - static_cast<int>(h.removed.size());
        }
        while (old_idx < old_lines.size()) out.push_back(old_lines[old_idx++]);
        tree[f.new_path] = std::move(out);
    }
}

}  // namespace

TEST_CASE("open_repo rejects non-repos and empty repos") {
    TempDir tmp("facade_open");
    std::filesystem::create_directories(tmp.sub("not_a_repo"));
    CHECK_THROWS_AS(RepoHandle::open(tmp.sub("not_a_repo")), NotARepo);

    std::filesystem::create_directories(tmp.sub("empty"));
    GitRunner init(tmp.sub("empty"));
    REQUIRE(init.run({"init", "-q", "-b", "master", "."}).ok());
    CHECK_THROWS_AS(RepoHandle::open(tmp.sub("empty")), EmptyRepo);
}

TEST_CASE("list_commits: linear chain is newest first") {
    TempDir tmp("facade_list");
    const auto map = build(linear_abc(), tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const auto commits = repo.list_commits(repo.head());
    REQUIRE(commits.size() == 3);
    CHECK(commits[0].id == map.id("c"));
    CHECK(commits[1].id == map.id("b"));
    CHECK(commits[2].id == map.id("a"));

    const auto only_root = repo.list_commits(repo.commit(map.id("a")));
    REQUIRE(only_root.size() == 1);
    CHECK(only_root[0].id == map.id("a"));
}

TEST_CASE("list_commits covers the merge DAG exactly once, children first") {
    TempDir tmp("facade_dag");
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "base\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"f.c", "base\nb\n"}}, "b\n", {}},
        FixtureStep{"c", {"a"}, {FixtureEdit{"g.c", "c\n"}}, "c\n", {}},
        FixtureStep{"m", {"b", "c"}, {}, "m\n", {}},
    };
    const auto map = build(s, tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const auto commits = repo.list_commits(repo.head());

    // Brute-force DAG walk oracle: ancestor set via parent edges.
    std::set<std::string> expected{map.id("m")};
    std::vector<std::string> work{map.id("m")};
    while (!work.empty()) {
        const auto cur = work.back();
        work.pop_back();
        for (const auto& p : repo.parent_ids(repo.commit(cur)))
            if (expected.insert(p).second) work.push_back(p);
    }
    std::set<std::string> actual;
    for (const auto& c : commits) CHECK(actual.insert(c.id).second);  // exactly once
    CHECK(actual == expected);

    // children precede parents
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < commits.size(); ++i) position[commits[i].id] = i;
    for (const auto& c : commits)
        for (const auto& p : repo.parent_ids(c)) CHECK(position.at(c.id) < position.at(p));
}

TEST_CASE("commit_diff: one-line edit, root against empty tree, merges empty") {
    TempDir tmp("facade_diff");
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "one\ntwo\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"f.c", "one\nTWO\n"}}, "b\n", {}},
        FixtureStep{"c", {"a"}, {FixtureEdit{"f.c", "one\ntwo\nthree\n"}}, "c\n", {}},
        FixtureStep{"m", {"b", "c"}, {}, "m\n", {}},
    };
    const auto map = build(s, tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);

    const auto edit = repo.commit_diff(repo.commit(map.id("b")));
    CHECK(edit->removed_count() == 1);
    CHECK(edit->added_count() == 1);
    const auto removed = edit->removed_lines();
    REQUIRE(removed.size() == 1);
    CHECK(removed[0].file == "f.c");
    CHECK(removed[0].number == 2);
    CHECK(removed[0].content == "two");
    CHECK(removed[0].kind == LineKind::Removed);

    const auto root = repo.commit_diff(repo.commit(map.id("a")));
    CHECK(root->removed_count() == 0);
    CHECK(root->added_count() == 2);

    const auto merge = repo.commit_diff(repo.commit(map.id("m")));
    CHECK(merge->files.empty());

    CHECK_THROWS_AS(repo.commit_diff(CommitRef{std::string(40, '0'), 0, 0, ""}), UnknownCommit);
}

TEST_CASE("commit_diff replay reproduces every file on random fixtures") {
    for (std::uint64_t seed : {5ULL, 17ULL, 29ULL}) {
        TempDir tmp("facade_replay");
        const FixtureScript script = random_fixture_script(seed);
        const auto map = build(script, tmp);
        const RepoHandle repo = RepoHandle::open(map.repo_path);

        std::map<std::string, std::vector<std::string>> tree;
        auto commits = repo.list_commits(repo.head());
        std::reverse(commits.begin(), commits.end());  // parents first (linear history)
        for (const auto& c : commits) apply_diff(tree, *repo.commit_diff(c));

        std::set<std::string> final_files;
        for (const auto& step : script.steps)
            for (const auto& e : step.edits)
                if (e.content) final_files.insert(e.file);
        for (const auto& file : final_files) {
            const auto expected = split_lines(repo.file_at(repo.head(), file));
            REQUIRE(tree.count(file));
            CHECK(tree.at(file) == expected);
        }
    }
}

TEST_CASE("blame_line attributes lines and follows renames") {
    TempDir tmp("facade_blame");
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "alpha\nbeta\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"f.c", "alpha\nbeta improved\n"}}, "b\n", {}},
        FixtureStep{"r",
                    {"b"},
                    {FixtureEdit{"f.c", std::nullopt},
                     FixtureEdit{"sub/g.c", "alpha\nbeta improved\n"}},
                    "rename\n",
                    {}},
        FixtureStep{"fix", {"r"}, {FixtureEdit{"sub/g.c", "alpha\nbeta fixed\n"}}, "fix\n", {}},
    };
    const auto map = build(s, tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);

    // line added by root -> origin root
    const BlameEntry root_blame = repo.blame_line(repo.commit(map.id("b")), "f.c", 1);
    CHECK(root_blame.origin.id == map.id("a"));

    // A adds, B edits, fix removes -> blame at fix is B, across the rename
    const BlameEntry b2 = repo.blame_line(repo.commit(map.id("fix")), "sub/g.c", 2);
    CHECK(b2.origin.id == map.id("b"));
    CHECK(b2.origin_path == "f.c");  // path at origin
    CHECK(b2.origin_line == 2);
    CHECK(b2.content == "beta improved");

    const auto rdiff = repo.commit_diff(repo.commit(map.id("r")));
    REQUIRE(rdiff->files.size() == 1);
    CHECK(rdiff->files[0].renamed);
    CHECK(rdiff->files[0].old_path == "f.c");
    CHECK(rdiff->files[0].new_path == "sub/g.c");
    CHECK(rdiff->files[0].hunks.empty());

    CHECK_THROWS_AS(repo.blame_line(repo.commit(map.id("fix")), "nope.c", 1), NoSuchPathAtCommit);
    CHECK_THROWS_AS(repo.blame_line(repo.commit(map.id("fix")), "sub/g.c", 99), LineOutOfRange);

    // blame origin is an ancestor of the queried commit
    const auto ancestors = repo.list_commits(repo.commit(map.id("fix")));
    CHECK(std::any_of(ancestors.begin(), ancestors.end(),
                      [&](const CommitRef& c) { return c.id == b2.origin.id; }));
}

TEST_CASE("log_line_range matches git log -L and is a subsequence of file history") {
    TempDir tmp("facade_range");
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "one\ntwo\nthree\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"f.c", "one\ntwo\nthree\nfour\n"}}, "b\n", {}},
        FixtureStep{"c", {"b"}, {FixtureEdit{"f.c", "one\ntwo CHANGED\nthree\nfour\n"}}, "c\n", {}},
        FixtureStep{"d", {"c"}, {FixtureEdit{"g.c", "other\n"}}, "d\n", {}},
    };
    const auto map = build(s, tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef head = repo.head();

    // range added in root, never touched again -> [root]
    const auto untouched = repo.log_line_range("f.c", 3, 3, head);
    REQUIRE(untouched.size() == 1);
    CHECK(untouched[0].id == map.id("a"));

    const auto range = repo.log_line_range("f.c", 2, 2, head);
    REQUIRE(range.size() == 2);
    CHECK(range[0].id == map.id("c"));  // newest first
    CHECK(range[1].id == map.id("a"));

    const auto history = repo.file_history("f.c", head);
    REQUIRE(history.size() == 3);
    CHECK(history[0].id == map.id("c"));
    CHECK(history[1].id == map.id("b"));
    CHECK(history[2].id == map.id("a"));

    // range-log output is a subsequence of the file history
    std::size_t pos = 0;
    for (const auto& c : range) {
        while (pos < history.size() && history[pos].id != c.id) ++pos;
        CHECK(pos < history.size());
    }

    CHECK_THROWS_AS(repo.log_line_range("f.c", 90, 95, head), RangeInvalid);
    CHECK_THROWS_AS(repo.log_line_range("f.c", 5, 2, head), RangeInvalid);
    CHECK_THROWS_AS(repo.log_line_range("nope.c", 1, 1, head), NoSuchPathAtCommit);
    CHECK_THROWS_AS(repo.file_history("nope.c", head), NoSuchPathAtCommit);
}

TEST_CASE("file_history skips commits that did not touch the path") {
    TempDir tmp("facade_fh");
    FixtureScript s;
    s.steps = {
        FixtureStep{"a", {}, {FixtureEdit{"f.c", "x\n"}}, "a\n", {}},
        FixtureStep{"b", {"a"}, {FixtureEdit{"g.c", "y\n"}}, "b\n", {}},
        FixtureStep{"c", {"b"}, {FixtureEdit{"f.c", "x\nz\n"}}, "c\n", {}},
    };
    const auto map = build(s, tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const auto history = repo.file_history("f.c", repo.head());
    REQUIRE(history.size() == 2);
    CHECK(history[0].id == map.id("c"));
    CHECK(history[1].id == map.id("a"));
}

TEST_CASE("resolve_partial_id: substring anywhere, identity, errors") {
    TempDir tmp("facade_resolve");
    const auto map = build(linear_abc(), tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);

    // full-id identity for every enumerated commit
    for (const auto& c : repo.list_commits(repo.head())) {
        const auto matches = repo.resolve_partial_id(c.id);
        REQUIRE(matches.size() == 1);
        CHECK(matches[0].id == c.id);
    }

    // mid-string match (the typo-tolerant rule)
    const std::string inner = map.id("b").substr(5, 12);
    const auto matches = repo.resolve_partial_id(inner);
    REQUIRE(!matches.empty());
    CHECK(std::any_of(matches.begin(), matches.end(),
                      [&](const CommitRef& c) { return c.id == map.id("b"); }));

    CHECK_THROWS_AS(repo.resolve_partial_id("abc123"), MalformedPartial);   // too short
    CHECK_THROWS_AS(repo.resolve_partial_id("xyzxyzz"), MalformedPartial);  // not hex
    CHECK_THROWS_AS(repo.resolve_partial_id(std::string(41, 'a')), MalformedPartial);
    CHECK(repo.resolve_partial_id("fffffff7777").empty());
}

TEST_CASE("operations are pure: repeated calls return identical results") {
    TempDir tmp("facade_pure");
    const auto map = build(linear_abc(), tmp);
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef b = repo.commit(map.id("b"));

    const auto d1 = repo.commit_diff(b)->removed_lines();
    const auto d2 = repo.commit_diff(b)->removed_lines();
    CHECK(d1 == d2);

    const auto bl1 = repo.blame_line(repo.commit(map.id("c")), "f.c", 2);
    const auto bl2 = repo.blame_line(repo.commit(map.id("c")), "f.c", 2);
    CHECK(bl1.origin.id == bl2.origin.id);
    CHECK(bl1.content == bl2.content);
}
