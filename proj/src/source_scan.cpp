// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/source_scan.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "szz/util.hpp"

namespace szz {

std::string mask_non_code(std::string_view content) {
    std::string out(content);
    enum class St { Normal, Block, LineComment, Str, Chr };
    St st = St::Normal;
    bool line_has_token = false;  // any non-ws seen on this line outside comments

    for (std::size_t i = 0; i < out.size(); ++i) {
        const char c = out[i];
        const char next = i + 1 < out.size() ? out[i + 1] : '\0';
        switch (st) {
            case St::Normal:
                if (c == '/' && next == '*') {
                    st = St::Block;
                    out[i] = out[i + 1] = ' ';
                    ++i;
                } else if (c == '/' && next == '/') {
                    st = St::LineComment;
                    out[i] = out[i + 1] = ' ';
                    ++i;
                } else if (c == '#' && !line_has_token) {
                    st = St::LineComment;
                    out[i] = ' ';
                } else if (c == '"') {
                    st = St::Str;
                    line_has_token = true;
                } else if (c == '\'') {
                    st = St::Chr;
                    line_has_token = true;
                } else if (c == '\n') {
                    line_has_token = false;
                } else if (!std::isspace(static_cast<unsigned char>(c))) {
                    line_has_token = true;
                }
                break;
            case St::Block:
                if (c == '*' && next == '/') {
                    out[i] = out[i + 1] = ' ';
                    ++i;
                    st = St::Normal;
                } else if (c != '\n') {
                    out[i] = ' ';
                }
                break;
            case St::LineComment:
                if (c == '\n') {
                    st = St::Normal;
                    line_has_token = false;
                } else {
                    out[i] = ' ';
                }
                break;
            case St::Str:
                if (c == '\\' && next != '\0' && next != '\n') {
                    out[i] = out[i + 1] = ' ';
                    ++i;
                } else if (c == '"') {
                    st = St::Normal;
                } else if (c == '\n') {
                    st = St::Normal;  // unterminated literal; do not leak across lines
                    line_has_token = false;
                } else {
                    out[i] = ' ';
                }
                break;
            case St::Chr:
                if (c == '\\' && next != '\0' && next != '\n') {
                    out[i] = ' ';
                    out[i + 1] = ' ';
                    ++i;
                } else if (c == '\'') {
                    st = St::Normal;
                } else if (c == '\n') {
                    st = St::Normal;
                    line_has_token = false;
                } else {
                    out[i] = ' ';
                }
                break;
        }
    }
    return out;
}

std::vector<LineClass> classify_source_lines(std::string_view content) {
    const std::string masked = mask_non_code(content);
    const auto original = split_lines(content);
    const auto cleaned = split_lines(masked);

    std::vector<LineClass> classes(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) {
        const bool orig_blank = trim(original[i]).empty();
        const bool masked_blank = trim(cleaned[i]).empty();
        classes[i] = orig_blank ? LineClass::Blank
                     : masked_blank ? LineClass::CommentOnly
                                    : LineClass::Code;
    }
    return classes;
}

bool whitespace_only_delta(std::string_view removed, std::string_view added) {
    if (removed == added) return false;  // no delta at all
    return collapse_whitespace(removed) == collapse_whitespace(added);
}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const std::set<std::string>& control_keywords() {
    static const std::set<std::string> kw = {"if",     "for",    "while", "switch",
                                             "do",     "else",   "return", "sizeof",
                                             "case",   "default"};
    return kw;
}

}  // namespace

FunctionScan scan_functions(std::string_view content) {
    const std::string masked = mask_non_code(content);
    FunctionScan result;

    std::vector<int> line_of(masked.size() + 1);
    int line = 1;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        line_of[i] = line;
        if (masked[i] == '\n') ++line;
    }
    line_of[masked.size()] = line;

    int depth = 0;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        const char c = masked[i];
        if (c == '}') {
            --depth;
            continue;
        }
        if (c != '{') continue;
        if (depth != 0) {
            ++depth;
            continue;
        }

        // Look backwards: ... name ( params ) [words] {
        std::size_t j = i;
        while (j > 0 && std::isspace(static_cast<unsigned char>(masked[j - 1]))) --j;
        // Allow bare word tokens (const, attribute macros) between ) and {.
        while (j > 0 && is_ident_char(masked[j - 1])) {
            std::size_t w = j;
            while (w > 0 && is_ident_char(masked[w - 1])) --w;
            j = w;
            while (j > 0 && std::isspace(static_cast<unsigned char>(masked[j - 1]))) --j;
        }
        bool is_function = j > 0 && masked[j - 1] == ')';
        std::string name;
        int name_line = 0;
        if (is_function) {
            int parens = 0;
            std::size_t k = j;  // masked[k-1] == ')'
            while (k > 0) {
                const char p = masked[--k];
                if (p == ')') ++parens;
                if (p == '(' && --parens == 0) break;
            }
            is_function = parens == 0 && masked[k] == '(';
            if (is_function) {
                std::size_t e = k;
                while (e > 0 && std::isspace(static_cast<unsigned char>(masked[e - 1]))) --e;
                std::size_t s = e;
                while (s > 0 && is_ident_char(masked[s - 1])) --s;
                name = masked.substr(s, e - s);
                name_line = line_of[s];
                if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) ||
                    control_keywords().count(name))
                    is_function = false;
            }
        }

        if (!is_function) {
            ++depth;
            continue;
        }

        // Find the matching closing brace.
        int body_depth = 0;
        std::size_t close = i;
        for (std::size_t k = i; k < masked.size(); ++k) {
            if (masked[k] == '{') ++body_depth;
            if (masked[k] == '}' && --body_depth == 0) {
                close = k;
                break;
            }
        }
        if (body_depth != 0) {
            result.balanced = false;
            break;
        }
        result.functions.push_back(SourceFunction{name, name_line, line_of[close]});
        i = close;  // continue after the body at depth 0
    }
    if (depth != 0) result.balanced = false;
    return result;
}

}  // namespace szz
