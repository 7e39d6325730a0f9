// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "szz/errors.hpp"
#include "szz/fixture_forge.hpp"
#include "szz/git_facade.hpp"
#include "szz/szz_suite.hpp"
#include "szz/tc_szz.hpp"
#include "szz/util.hpp"
#include "szz_fixtures.hpp"
#include "test_support.hpp"

using namespace szz;
using szz::test::TempDir;

namespace {

// chain must appear inside provenance in order
bool is_subsequence(const std::vector<std::string>& chain,
                    const std::vector<std::string>& provenance) {
    std::size_t pos = 0;
    for (const auto& id : chain) {
        while (pos < provenance.size() && provenance[pos] != id) ++pos;
        if (pos == provenance.size()) return false;
        ++pos;
    }
    return true;
}

}  // namespace

TEST_CASE("line_similarity basics and brute-force equivalence") {
    CHECK(line_similarity("x = 1;", "x = 1;") == 1.0);
    CHECK(line_similarity("abc", "abd") == doctest::Approx(2.0 / 3.0));
    CHECK(line_similarity("", "") == 1.0);
    CHECK(line_similarity("   ", "\t") == 1.0);  // whitespace collapses away
    CHECK(line_similarity("int x = 1;", "int  x=1 ;") == 1.0);
    CHECK(line_similarity("abcd", "wxyz") == 0.0);

    // cross-check the normalized formula against the DP distance directly
    const std::vector<std::pair<std::string, std::string>> corpus = {
        {"limit = threshold(base);", "limit = threshold(base - 1);"},
        {"for (i = 0; i < n; i++)", "for (j = 0; j < n; j++)"},
        {"return -EINVAL;", "return -ENOMEM;"},
    };
    for (const auto& [a, b] : corpus) {
        const std::string ca = collapse_whitespace(a), cb = collapse_whitespace(b);
        const double expected =
            1.0 - static_cast<double>(edit_distance(ca, cb)) / std::max(ca.size(), cb.size());
        CHECK(line_similarity(a, b) == doctest::Approx(expected));
        CHECK(line_similarity(a, b) == doctest::Approx(line_similarity(b, a)));
    }
}

TEST_CASE("trace_line follows the deep lineage to the initial commit") {
    TempDir tmp("tc_lineage");
    const FixtureScript script = szz::test::deep_lineage_script();
    const auto map = build_fixture(script, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef fix = repo.commit(map.id("fix"));

    const auto removed = removed_lines(repo, fix);
    REQUIRE(removed.size() == 1);
    const TraceChain chain = trace_line(repo, fix, removed[0]);

    REQUIRE(chain.hops.size() == 5);
    CHECK(chain.hops[0].commit_id == map.id("previous"));
    CHECK(chain.hops[0].role == ChainRole::Previous);
    CHECK(chain.hops[1].commit_id == map.id("desc1"));
    CHECK(chain.hops[1].role == ChainRole::Descendant);
    CHECK(chain.hops[2].commit_id == map.id("inducer"));  // the true origin, third hop
    CHECK(chain.hops[2].role == ChainRole::Descendant);
    CHECK(chain.hops[3].commit_id == map.id("desc3"));
    CHECK(chain.hops[3].role == ChainRole::Descendant);
    CHECK(chain.hops[4].commit_id == map.id("initial"));
    CHECK(chain.hops[4].role == ChainRole::Initial);

    // no duplicates in the chain
    auto ids = chain.commit_ids();
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("single-hop chain: line created in the root, fixed next commit") {
    TempDir tmp("tc_single");
    FixtureScript s;
    s.steps = {
        FixtureStep{"root", {}, {FixtureEdit{"f.c", "only_line();\n"}}, "root\n", {}},
        FixtureStep{"fix", {"root"}, {FixtureEdit{"f.c", "only_line_fixed();\n"}}, "fix\n", {}},
    };
    const auto map = build_fixture(s, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const auto removed = removed_lines(repo, repo.commit(map.id("fix")));
    REQUIRE(removed.size() == 1);
    const TraceChain chain = trace_line(repo, repo.commit(map.id("fix")), removed[0]);
    REQUIRE(chain.hops.size() == 1);
    CHECK(chain.hops[0].commit_id == map.id("root"));
    CHECK(chain.hops[0].role == ChainRole::Initial);  // previous and initial coincide
}

TEST_CASE("trace continues across an in-file relocation where range-log stops") {
    TempDir tmp("tc_move");
    FixtureScript s;
    s.steps = {
        FixtureStep{"author", {},
                    {FixtureEdit{"f.c",
                                 "static int helper_limit(int v) { return v + 17; }\n"
                                 "void unrelated_one(void) {}\n"
                                 "void unrelated_two(void) {}\n"}},
                    "author\n", {}},
        // move the helper to the bottom of the file
        FixtureStep{"move", {"author"},
                    {FixtureEdit{"f.c",
                                 "void unrelated_one(void) {}\n"
                                 "void unrelated_two(void) {}\n"
                                 "static int helper_limit(int v) { return v + 17; }\n"}},
                    "relocate helper\n", {}},
        FixtureStep{"fix", {"move"},
                    {FixtureEdit{"f.c",
                                 "void unrelated_one(void) {}\n"
                                 "void unrelated_two(void) {}\n"
                                 "static int helper_limit(int v) { return v + 16; }\n"}},
                    "fix the helper\n", {}},
    };
    const auto map = build_fixture(s, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef fix = repo.commit(map.id("fix"));

    const auto removed = removed_lines(repo, fix);
    REQUIRE(removed.size() == 1);
    const TraceChain chain = trace_line(repo, fix, removed[0]);
    const auto ids = chain.commit_ids();
    // the trace walks through the move and reaches the original author
    CHECK(std::find(ids.begin(), ids.end(), map.id("author")) != ids.end());

    // the range log over the moved line stops at the relocation commit
    const auto range = repo.log_line_range("f.c", 3, 3, repo.commit(map.id("move")));
    CHECK(std::none_of(range.begin(), range.end(),
                       [&](const CommitRef& c) { return c.id == map.id("author"); }));
}

TEST_CASE("tcszz modes: custom blame truncation and unique commits") {
    TempDir tmp("tc_modes");
    const FixtureScript script = szz::test::deep_lineage_script();
    const auto map = build_fixture(script, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef fix = repo.commit(map.id("fix"));

    const Prediction one = tcszz_predict(repo, fix, TcModeSpec{TcMode::CustomBlame, 1});
    CHECK(one.inducing == bszz(repo, fix).inducing);
    CHECK_FALSE(one.contains(map.id("inducer")));

    const Prediction two = tcszz_predict(repo, fix, TcModeSpec{TcMode::CustomBlame, 2});
    CHECK(two.inducing.size() == 2);
    CHECK(two.contains(map.id("previous")));
    CHECK(two.contains(map.id("desc1")));

    const Prediction full = tcszz_predict(repo, fix, TcModeSpec{TcMode::UniqueCommits, -1});
    CHECK(full.inducing.size() == 5);
    CHECK(full.contains(map.id("inducer")));

    // chronological order preserves the per-line blame sequence
    const TcResult result = tcszz(repo, fix);
    const auto chrono = result.chronological_ids();
    REQUIRE(chrono.size() == 5);
    CHECK(chrono.front() == map.id("previous"));
    CHECK(chrono.back() == map.id("initial"));
}

TEST_CASE("monotone recall: bszz results are contained in the full trace") {
    for (std::uint64_t seed : {404ULL, 505ULL}) {
        TempDir tmp("tc_mono");
        const FixtureScript script = random_fixture_script(seed);
        const auto map = build_fixture(script, tmp.sub("repo"));
        const RepoHandle repo = RepoHandle::open(map.repo_path);
        for (const auto& step : script.steps) {
            const CommitRef fix = repo.commit(map.id(step.label));
            if (fix.parent_count == 0) continue;
            const Prediction b = bszz(repo, fix);
            const Prediction tc = tcszz_predict(repo, fix, TcModeSpec{TcMode::UniqueCommits, -1});
            for (const auto& id : b.inducing) CHECK(tc.contains(id));
            CHECK(tcszz_predict(repo, fix, TcModeSpec{TcMode::CustomBlame, 1}).inducing ==
                  b.inducing);
        }
    }
}

TEST_CASE("chains equal the oracle provenance on generated fixtures") {
    for (std::uint64_t seed : {606ULL, 707ULL}) {
        TempDir tmp("tc_oracle");
        const FixtureScript script = random_fixture_script(seed);
        const auto map = build_fixture(script, tmp.sub("repo"));
        const ProvenanceOracle oracle = ProvenanceOracle::build(script, map);
        const RepoHandle repo = RepoHandle::open(map.repo_path);

        for (const auto& step : script.steps) {
            const CommitRef fix = repo.commit(map.id(step.label));
            if (fix.parent_count == 0) continue;
            for (const auto& chain : tcszz(repo, fix).chains) {
                const auto& prov = oracle.removed_line_provenance(fix.id, chain.line.file,
                                                                  chain.line.number);
                const auto ids = chain.commit_ids();
                CHECK(is_subsequence(ids, prov.history));
                // the generator keeps every edit above the similarity
                // threshold, so the trace reaches the full history
                CHECK(ids == prov.history);
                CHECK(chain.hops.size() <= prov.history.size());
            }
        }
    }
}

TEST_CASE("max_depth bounds the chain; rejects lines the fix did not remove") {
    TempDir tmp("tc_depth");
    const FixtureScript script = szz::test::deep_lineage_script();
    const auto map = build_fixture(script, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const CommitRef fix = repo.commit(map.id("fix"));
    const auto removed = removed_lines(repo, fix);
    REQUIRE(!removed.empty());

    TcOptions bounded;
    bounded.max_depth = 2;
    CHECK(trace_line(repo, fix, removed[0], bounded).hops.size() == 2);

    LineChange bogus{"calc.c", 1, "never removed", LineKind::Removed};
    CHECK_THROWS_AS(trace_line(repo, fix, bogus), LineNotRemovedByFix);
}

TEST_CASE("similarity threshold stops the trace at rewrites") {
    TempDir tmp("tc_threshold");
    FixtureScript s;
    s.steps = {
        FixtureStep{"old", {}, {FixtureEdit{"f.c", "completely_different_call(a, b, c);\n"}},
                    "old\n", {}},
        FixtureStep{"rewrite", {"old"}, {FixtureEdit{"f.c", "short x;\n"}}, "rewrite\n", {}},
        FixtureStep{"fix", {"rewrite"}, {FixtureEdit{"f.c", "short y;\n"}}, "fix\n", {}},
    };
    const auto map = build_fixture(s, tmp.sub("repo"));
    const RepoHandle repo = RepoHandle::open(map.repo_path);
    const auto removed = removed_lines(repo, repo.commit(map.id("fix")));
    REQUIRE(removed.size() == 1);

    const TraceChain chain = trace_line(repo, repo.commit(map.id("fix")), removed[0]);
    REQUIRE(chain.hops.size() == 1);  // rewrite kills the similarity link
    CHECK(chain.hops[0].commit_id == map.id("rewrite"));
    CHECK(chain.hops[0].role == ChainRole::Initial);

    // a permissive threshold lets the trace continue instead
    TcOptions lax;
    lax.similarity_threshold = 0.01;
    const TraceChain longer = trace_line(repo, repo.commit(map.id("fix")), removed[0], lax);
    CHECK(longer.hops.size() == 2);
}
