// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
//
// One scripted repository per failure-mode rung. Each script names a "fix"
// step and an "inducer" step; the fix always fails plain blame (the inducer
// is never the blame origin of any removed line) and the inducer is only
// reachable at the intended rung.
#pragma once

#include "szz/fixture_forge.hpp"

namespace szz::test {

// Rung 1 — LineChange: the inducer sits deeper in the removed line's own
// change history (the deep-lineage shape).
inline FixtureScript ladder_line_change() {
    FixtureScript s;
    s.steps = {
        FixtureStep{"initial", {},
                    {FixtureEdit{"a.c", "int threshold_limit = compute_limit(base_rate);\n"}},
                    "initial\n", {}},
        FixtureStep{"inducer", {"initial"},
                    {FixtureEdit{"a.c", "int threshold_limit = compute_limit(base_rate - 1);\n"}},
                    "inducer\n", {}},
        FixtureStep{"churn", {"inducer"},
                    {FixtureEdit{"a.c",
                                 "int threshold_limit = compute_limit(base_rate - 1) + slack;\n"}},
                    "churn\n", {}},
        FixtureStep{"fix", {"churn"},
                    {FixtureEdit{"a.c", "int threshold_limit = compute_limit(base_rate);\n"}},
                    "fix\n", {}},
    };
    return s;
}

namespace detail {

// A file with two functions; the target lines inside alpha() get edited by
// the steps below.
inline std::string two_function_file(const std::string& alpha_line2,
                                     const std::string& alpha_line3,
                                     const std::string& beta_line) {
    return "int alpha(int v)\n"
           "{\n" +
           alpha_line2 + "\n" + alpha_line3 + "\n" +
           "\treturn v;\n"
           "}\n"
           "int beta(int v)\n"
           "{\n" +
           beta_line + "\n" +
           "\treturn v + 1;\n"
           "}\n";
}

}  // namespace detail

// Rung 2 — FunctionBlame: the inducer last touched a *different* line of the
// enclosing function, so one blame over the whole function finds it while
// the removed line's history does not.
inline FixtureScript ladder_function_blame() {
    using detail::two_function_file;
    FixtureScript s;
    s.steps = {
        FixtureStep{"base", {},
                    {FixtureEdit{"b.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")}},
                    "base\n", {}},
        FixtureStep{"inducer", {"base"},
                    {FixtureEdit{"b.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta * 2;",
                                                          "\tint unrelated = 0;")}},
                    "inducer touches line 4\n", {}},
        FixtureStep{"churn", {"inducer"},
                    {FixtureEdit{"b.c", two_function_file("\tint acc = seed_value + 1;",
                                                          "\tacc += step_delta * 2;",
                                                          "\tint unrelated = 0;")}},
                    "churn touches line 3\n", {}},
        FixtureStep{"fix", {"churn"},
                    {FixtureEdit{"b.c", two_function_file("\tint acc = seed_value + 2;",
                                                          "\tacc += step_delta * 2;",
                                                          "\tint unrelated = 0;")}},
                    "fix touches line 3 only\n", {}},
    };
    return s;
}

// Rung 3 — FunctionLog: the inducer's line was later rewritten beyond
// recognition, so blame over the function misses it but the range log of the
// function still lists the inducer.
inline FixtureScript ladder_function_log() {
    using detail::two_function_file;
    FixtureScript s;
    s.steps = {
        FixtureStep{"base", {},
                    {FixtureEdit{"c.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")}},
                    "base\n", {}},
        FixtureStep{"inducer", {"base"},
                    {FixtureEdit{"c.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta * 2;",
                                                          "\tint unrelated = 0;")}},
                    "inducer touches line 4\n", {}},
        FixtureStep{"rewrite", {"inducer"},
                    {FixtureEdit{"c.c", two_function_file("\tint acc = seed_value;",
                                                          "\tcall_entirely_new_helper();",
                                                          "\tint unrelated = 0;")}},
                    "rewrite line 4 completely\n", {}},
        FixtureStep{"churn", {"rewrite"},
                    {FixtureEdit{"c.c", two_function_file("\tint acc = seed_value + 1;",
                                                          "\tcall_entirely_new_helper();",
                                                          "\tint unrelated = 0;")}},
                    "churn touches line 3\n", {}},
        FixtureStep{"fix", {"churn"},
                    {FixtureEdit{"c.c", two_function_file("\tint acc = seed_value + 2;",
                                                          "\tcall_entirely_new_helper();",
                                                          "\tint unrelated = 0;")}},
                    "fix touches line 3 only\n", {}},
    };
    return s;
}

// Rung 4 — WithinFile: the inducer touched the same file but outside the
// fixed function.
inline FixtureScript ladder_within_file() {
    using detail::two_function_file;
    FixtureScript s;
    s.steps = {
        FixtureStep{"base", {},
                    {FixtureEdit{"d.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")}},
                    "base\n", {}},
        FixtureStep{"inducer", {"base"},
                    {FixtureEdit{"d.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 7;")}},
                    "inducer edits beta only\n", {}},
        FixtureStep{"churn", {"inducer"},
                    {FixtureEdit{"d.c", two_function_file("\tint acc = seed_value + 1;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 7;")}},
                    "churn edits alpha\n", {}},
        FixtureStep{"fix", {"churn"},
                    {FixtureEdit{"d.c", two_function_file("\tint acc = seed_value + 2;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 7;")}},
                    "fix edits alpha only\n", {}},
    };
    return s;
}

// Rung 5 — CrossFile: the inducer only ever touched a different file.
inline FixtureScript ladder_cross_file() {
    using detail::two_function_file;
    FixtureScript s;
    s.steps = {
        FixtureStep{"base", {},
                    {FixtureEdit{"e.c", two_function_file("\tint acc = seed_value;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")},
                     FixtureEdit{"shared.h", "#define SCALE_FACTOR 10\n"}},
                    "base\n", {}},
        FixtureStep{"inducer", {"base"},
                    {FixtureEdit{"shared.h", "#define SCALE_FACTOR 1000\n"}},
                    "inducer edits the other file\n", {}},
        FixtureStep{"churn", {"inducer"},
                    {FixtureEdit{"e.c", two_function_file("\tint acc = seed_value + 1;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")}},
                    "churn edits alpha\n", {}},
        FixtureStep{"fix", {"churn"},
                    {FixtureEdit{"e.c", two_function_file("\tint acc = seed_value + 2;",
                                                          "\tacc += step_delta;",
                                                          "\tint unrelated = 0;")}},
                    "fix edits alpha only\n", {}},
    };
    return s;
}

}  // namespace szz::test
