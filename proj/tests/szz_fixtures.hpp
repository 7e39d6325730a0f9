// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
//
// Scripted repositories shared by the suite, tracer, classifier and
// acceptance tests.
#pragma once

#include "szz/fixture_forge.hpp"

namespace szz::test {

// One line evolving through five commits before being fixed: the motivating
// lineage for the tracer. The defect enters at `inducer`, two commits after
// the line's creation; plain blame at the fix only reaches `previous`.
inline FixtureScript deep_lineage_script() {
    FixtureScript s;
    const char* head = "int base = 4;\nint margin_default = 2;\n";
    auto body = [&](const char* target) { return std::string(head) + target + "\n"; };
    s.steps = {
        FixtureStep{"initial", {}, {FixtureEdit{"calc.c", body("limit = compute_treshold(base);")}},
                    "initial\n", {}},
        FixtureStep{"desc3", {"initial"},
                    {FixtureEdit{"calc.c", body("limit = compute_threshold(base);")}},
                    "fix typo in name\n", {}},
        FixtureStep{"inducer", {"desc3"},
                    {FixtureEdit{"calc.c", body("limit = compute_threshold(base - 1);")}},
                    "off by one enters here\n", {}},
        FixtureStep{"desc1", {"inducer"},
                    {FixtureEdit{"calc.c", body("limit = compute_threshold(base - 1) + margin;")}},
                    "add margin\n", {}},
        FixtureStep{"previous", {"desc1"},
                    {FixtureEdit{"calc.c",
                                 body("limit = compute_threshold(base - 1) + margin_default;")}},
                    "use default margin\n", {}},
        FixtureStep{"fix", {"previous"},
                    {FixtureEdit{"calc.c",
                                 body("limit = compute_threshold(base) + margin_default;")}},
                    "repair the off by one\n", {}},
    };
    return s;
}

// fix_add only adds a line (nothing to map back from); inducer_del only
// removes one (unreachable by blame).
inline FixtureScript ghost_script() {
    FixtureScript s;
    s.steps = {
        FixtureStep{"base", {},
                    {FixtureEdit{"g.c", "int keep_a = 1;\nint stale = 2;\nint keep_b = 3;\n"}},
                    "base\n", {}},
        FixtureStep{"inducer_del", {"base"},
                    {FixtureEdit{"g.c", "int keep_a = 1;\nint keep_b = 3;\n"}},
                    "drop the stale counter\n", {}},
        FixtureStep{"fix_add", {"inducer_del"},
                    {FixtureEdit{"g.c", "int keep_a = 1;\nint keep_b = 3;\nint guard = 0;\n"}},
                    "reintroduce a guard\n", {}},
    };
    return s;
}

}  // namespace szz::test
