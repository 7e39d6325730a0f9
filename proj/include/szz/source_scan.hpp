// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace szz {

enum class LineClass { Code, Blank, CommentOnly, WhitespaceOnlyDelta };

// Per-line classification of C-family source. Block comments are tracked by
// a forward scan over the whole file, so continuation lines of a /* ... */
// span classify as CommentOnly; '#'-initial lines count as comments too.
// WhitespaceOnlyDelta is never produced here: it describes a removed/added
// pair, see whitespace_only_delta().
std::vector<LineClass> classify_source_lines(std::string_view content);

bool whitespace_only_delta(std::string_view removed, std::string_view added);

// Copy of the source with comment bodies, comment delimiters and
// string/char-literal interiors blanked out; newlines and all other
// structure are preserved.
std::string mask_non_code(std::string_view content);

struct SourceFunction {
    std::string name;
    int start_line = 0;  // 1-based, line holding the function name
    int end_line = 0;    // line of the closing brace
};

struct FunctionScan {
    std::vector<SourceFunction> functions;
    bool balanced = true;  // false when braces do not balance
};

// Brace-balanced scan for top-level function definitions: an identifier,
// a parenthesised parameter list and an opening brace at depth zero.
FunctionScan scan_functions(std::string_view content);

}  // namespace szz
